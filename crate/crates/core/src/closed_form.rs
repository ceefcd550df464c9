//! Closed-form scaled centralities and stability thresholds for complete,
//! nearly-complete and star graphs, plus an audit of each formula against
//! the numerical Katz solver.
//!
//! Thresholds are in cost-per-reward units: a player with reward `R` and
//! link cost `γ` is compared through `γ / R`. A move is only taken when it
//! strictly improves payoff, so a ratio sitting exactly on a threshold counts
//! as stable against that move.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::katz::{self, GUARD_EPSILON};

/// Pass/fail tolerance for [`verify_closed_forms`].
pub const VERIFY_TOLERANCE: f64 = 1e-10;

fn require_players(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::TooFewVertices { min, got: n })
    } else {
        Ok(())
    }
}

fn require_below_one(name: &'static str, value: f64) -> Result<()> {
    if value < 1.0 - GUARD_EPSILON {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            alloc::format!("convergence bound {value} is not below 1"),
        ))
    }
}

/// Scaled centrality of every vertex of `K_n`: `1/n`.
pub fn complete_scaled(n: usize) -> Result<f64> {
    require_players(n, 2)?;
    Ok(1.0 / n as f64)
}

/// `(K_b, K_s)` for `K_n` minus one edge: `K_s` for the two endpoints of the
/// missing edge, `K_b` for the `n − 2` others.
///
/// `K_b = (2α(n−2) + n − 1) / ((n−2)(2nα + n + 1))`, which is what the
/// normalization `(n−2)K_b + 2K_s = 1` forces given `K_s`.
pub fn nearly_complete_scaled(n: usize, alpha: f64) -> Result<(f64, f64)> {
    require_players(n, 3)?;
    katz::check_alpha(alpha)?;
    require_below_one("alpha", alpha * (n - 1) as f64)?;
    let nf = n as f64;
    let denom = 2.0 * nf * alpha + nf + 1.0;
    let ks = (2.0 * alpha + 1.0) / denom;
    let kb = (2.0 * alpha * (nf - 2.0) + nf - 1.0) / ((nf - 2.0) * denom);
    Ok((kb, ks))
}

/// `K_b` with the numerator `(2n−2)α + n`. This variant does not
/// normalize and is kept only so the audit can report the discrepancy.
pub fn nearly_complete_kb_unnormalized(n: usize, alpha: f64) -> Result<f64> {
    require_players(n, 3)?;
    katz::check_alpha(alpha)?;
    let nf = n as f64;
    Ok(((2.0 * nf - 2.0) * alpha + nf) / ((nf - 2.0) * (2.0 * nf * alpha + nf + 1.0)))
}

/// `(K_b, K_s)` for the star `S_n`: hub and leaves.
pub fn star_scaled(n: usize, alpha: f64) -> Result<(f64, f64)> {
    require_players(n, 3)?;
    katz::check_alpha(alpha)?;
    require_below_one("alpha", alpha * alpha * (n - 1) as f64)?;
    let nf = n as f64;
    let kb = (alpha + 1.0) / (nf * alpha + 2.0);
    let ks = ((nf - 1.0) * alpha + 1.0) / ((nf - 1.0) * (nf * alpha + 2.0));
    Ok((kb, ks))
}

/// Scaled centrality of each of two star leaves after they link to each other.
pub fn star_leaf_link_scaled(n: usize, alpha: f64) -> Result<f64> {
    require_players(n, 4)?;
    katz::check_alpha(alpha)?;
    let mut g = Graph::star(n)?;
    g.add_edge(2, 3)?;
    require_below_one("alpha", alpha * g.spectral_radius().value)?;
    let nf = n as f64;
    let num = (nf - 3.0) * alpha * alpha + (1.0 - nf) * alpha - 2.0;
    let den = (nf - 3.0) * (alpha - 1.0) * nf * alpha - 2.0 * nf - 6.0 * alpha;
    Ok(num / den)
}

/// Largest `γ/R` at which `K_n` survives every single-link deletion:
/// `(n−1) / (n(2nα + n + 1))`.
pub fn complete_stable_threshold(n: usize, alpha: f64) -> Result<f64> {
    require_players(n, 2)?;
    katz::check_alpha(alpha)?;
    require_below_one("alpha", alpha * (n - 1) as f64)?;
    let nf = n as f64;
    Ok((nf - 1.0) / (nf * (2.0 * nf * alpha + nf + 1.0)))
}

/// `K_n` is pairwise stable iff no player gains by deleting a link.
pub fn complete_is_stable(n: usize, alpha: f64, cost_per_reward: f64) -> Result<bool> {
    Ok(cost_per_reward <= complete_stable_threshold(n, alpha)?)
}

/// Stability window of the star `S_n` with hub cost `ζ` and leaf cost `δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarWindow {
    /// Below this `δ/R` two leaves gain by linking.
    pub delta_lo: f64,
    /// Above this `δ/R` a leaf gains by dropping the hub.
    pub delta_hi: f64,
    /// Above this `ζ/R` the hub gains by dropping a leaf.
    pub zeta_hi: f64,
}

impl StarWindow {
    pub fn is_meaningful(&self) -> bool {
        self.delta_lo < self.delta_hi
    }

    pub fn leaf_stable(&self, delta_per_reward: f64) -> bool {
        self.delta_lo <= delta_per_reward && delta_per_reward <= self.delta_hi
    }

    pub fn hub_stable(&self, zeta_per_reward: f64) -> bool {
        zeta_per_reward <= self.zeta_hi
    }

    pub fn contains(&self, delta_per_reward: f64, zeta_per_reward: f64) -> bool {
        self.leaf_stable(delta_per_reward) && self.hub_stable(zeta_per_reward)
    }
}

pub fn star_window(n: usize, alpha: f64) -> Result<StarWindow> {
    require_players(n, 4)?;
    let (_, ks) = star_scaled(n, alpha)?;
    let linked = star_leaf_link_scaled(n, alpha)?;
    let nf = n as f64;
    Ok(StarWindow {
        delta_lo: (nf - 1.0) * (linked - ks),
        delta_hi: ((nf - 1.0) * alpha + 1.0) / (nf * alpha + 2.0),
        zeta_hi: (alpha + 1.0) * (alpha + 2.0)
            / ((nf * alpha + 2.0) * ((nf - 1.0) * alpha + 2.0)),
    })
}

/// How the audit picks `α` for each `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaChoice {
    Fixed(f64),
    /// `α = factor / (n − 1)`.
    PerDegree(f64),
}

impl AlphaChoice {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            AlphaChoice::Fixed(alpha) => alpha,
            AlphaChoice::PerDegree(factor) => factor / (n.saturating_sub(1).max(1)) as f64,
        }
    }
}

/// Formulas under audit. Swappable so the harness can be checked against a
/// deliberately broken formula.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub complete_scaled: fn(usize) -> Result<f64>,
    pub nearly_complete_scaled: fn(usize, f64) -> Result<(f64, f64)>,
    pub star_scaled: fn(usize, f64) -> Result<(f64, f64)>,
    pub star_leaf_link_scaled: fn(usize, f64) -> Result<f64>,
    pub complete_stable_threshold: fn(usize, f64) -> Result<f64>,
    pub star_window: fn(usize, f64) -> Result<StarWindow>,
}

impl Default for ClosedForms {
    fn default() -> Self {
        ClosedForms {
            complete_scaled,
            nearly_complete_scaled,
            star_scaled,
            star_leaf_link_scaled,
            complete_stable_threshold,
            star_window,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported but never counted as a failure.
    Informational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationRow {
    pub check: &'static str,
    pub n: usize,
    pub alpha: f64,
    pub closed_form: f64,
    pub numerical: f64,
    pub abs_error: f64,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkippedPoint {
    pub check: &'static str,
    pub n: usize,
    pub alpha: f64,
    pub reason: Error,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub skipped: Vec<SkippedPoint>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationRow> {
        self.rows.iter().filter(|r| r.status == CheckStatus::Fail)
    }

    /// Largest error among rows of `check`.
    pub fn max_error(&self, check: &str) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.check == check)
            .map(|r| r.abs_error)
            .reduce(f64::max)
    }

    pub fn row(&self, check: &str, n: usize, alpha: f64) -> Option<&VerificationRow> {
        self.rows
            .iter()
            .find(|r| r.check == check && r.n == n && r.alpha == alpha)
    }
}

pub fn verify_closed_forms(ns: RangeInclusive<usize>, alphas: &[AlphaChoice]) -> VerificationReport {
    verify_closed_forms_with(&ClosedForms::default(), ns, alphas)
}

/// Numerical scaled values used by the audit, one per structural vertex class.
struct Numerical {
    complete: Option<f64>,
    nearly: Option<(f64, f64)>,
    star: Option<(f64, f64)>,
    smaller_star_hub: Option<f64>,
    leaf_link: Option<f64>,
}

fn numerical_scaled(g: &Graph, alpha: f64, vertices: &[usize]) -> Result<f64> {
    let report = katz::scaled_component_katz(g, alpha)?;
    // Report the class member farthest from the first one so symmetry breaks surface.
    let first = report.scaled_of(vertices[0]);
    Ok(vertices
        .iter()
        .map(|&v| report.scaled_of(v))
        .max_by(|a, b| (a - first).abs().total_cmp(&(b - first).abs()))
        .unwrap_or(first))
}

fn numerical(n: usize, alpha: f64) -> Result<Numerical> {
    let all: Vec<usize> = (1..=n).collect();
    let complete = numerical_scaled(&Graph::complete(n)?, alpha, &all).ok();
    let nearly = if n >= 3 {
        let g = Graph::nearly_complete(n)?;
        numerical_scaled(&g, alpha, &all[2..])
            .and_then(|kb| Ok((kb, numerical_scaled(&g, alpha, &all[..2])?)))
            .ok()
    } else {
        None
    };
    let star_pair = |m: usize| -> Result<(f64, f64)> {
        let g = Graph::star(m)?;
        let leaves: Vec<usize> = (2..=m).collect();
        Ok((numerical_scaled(&g, alpha, &[1])?, numerical_scaled(&g, alpha, &leaves)?))
    };
    let star = if n >= 3 { star_pair(n).ok() } else { None };
    let smaller_star_hub = if n >= 4 {
        star_pair(n - 1).ok().map(|(hub, _)| hub)
    } else {
        None
    };
    let leaf_link = if n >= 4 {
        let mut g = Graph::star(n)?;
        g.add_edge(2, 3)?;
        numerical_scaled(&g, alpha, &[2, 3]).ok()
    } else {
        None
    };
    Ok(Numerical {
        complete,
        nearly,
        star,
        smaller_star_hub,
        leaf_link,
    })
}

pub fn verify_closed_forms_with(
    forms: &ClosedForms,
    ns: RangeInclusive<usize>,
    alphas: &[AlphaChoice],
) -> VerificationReport {
    let mut report = VerificationReport::default();
    for n in ns {
        for choice in alphas {
            let alpha = choice.resolve(n);
            audit_point(forms, n, alpha, &mut report);
        }
    }
    report
}

fn audit_point(forms: &ClosedForms, n: usize, alpha: f64, report: &mut VerificationReport) {
    let mut record = |check: &'static str, closed: Result<f64>, numeric: Option<Result<f64>>, informational: bool| {
        let numeric = match numeric {
            Some(value) => value,
            None => Err(Error::invalid("graph", "numerical counterpart unavailable")),
        };
        match (closed, numeric) {
            (Ok(closed_form), Ok(numerical)) => {
                let abs_error = (closed_form - numerical).abs();
                let status = if informational {
                    CheckStatus::Informational
                } else if abs_error <= VERIFY_TOLERANCE {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                };
                report.rows.push(VerificationRow {
                    check,
                    n,
                    alpha,
                    closed_form,
                    numerical,
                    abs_error,
                    status,
                });
            }
            (Err(reason), _) | (_, Err(reason)) => report.skipped.push(SkippedPoint {
                check,
                n,
                alpha,
                reason,
            }),
        }
    };

    let num = match katz::check_alpha(alpha).and_then(|_| numerical(n, alpha)) {
        Ok(num) => num,
        Err(reason) => {
            report.skipped.push(SkippedPoint {
                check: "all",
                n,
                alpha,
                reason,
            });
            return;
        }
    };
    let nm1 = n as f64 - 1.0;

    record("complete_k", (forms.complete_scaled)(n), num.complete.map(Ok), false);

    let nearly = (forms.nearly_complete_scaled)(n, alpha);
    record("nearly_complete_kb", nearly.clone().map(|p| p.0), num.nearly.map(|p| Ok(p.0)), false);
    record("nearly_complete_ks", nearly.map(|p| p.1), num.nearly.map(|p| Ok(p.1)), false);
    record(
        "nearly_complete_kb_unnormalized",
        nearly_complete_kb_unnormalized(n, alpha),
        num.nearly.map(|p| Ok(p.0)),
        true,
    );
    record(
        "complete_threshold",
        (forms.complete_stable_threshold)(n, alpha),
        num.complete
            .zip(num.nearly)
            .map(|(k, (_, ks))| Ok(nm1 * (k - ks))),
        false,
    );

    let star = (forms.star_scaled)(n, alpha);
    record("star_kb", star.clone().map(|p| p.0), num.star.map(|p| Ok(p.0)), false);
    record("star_ks", star.map(|p| p.1), num.star.map(|p| Ok(p.1)), false);
    record(
        "star_leaf_link_ks",
        (forms.star_leaf_link_scaled)(n, alpha),
        num.leaf_link.map(Ok),
        false,
    );

    let window = (forms.star_window)(n, alpha);
    let numeric_window = match (num.star, num.leaf_link, num.smaller_star_hub) {
        (Some((kb, ks)), Some(linked), Some(smaller_kb)) => Some(StarWindow {
            delta_lo: nm1 * (linked - ks),
            delta_hi: nm1 * ks,
            zeta_hi: nm1 * kb - (nm1 - 1.0) * smaller_kb,
        }),
        _ => None,
    };
    record(
        "star_delta_lo",
        window.clone().map(|w| w.delta_lo),
        numeric_window.map(|w| Ok(w.delta_lo)),
        false,
    );
    record(
        "star_delta_hi",
        window.clone().map(|w| w.delta_hi),
        numeric_window.map(|w| Ok(w.delta_hi)),
        false,
    );
    record(
        "star_zeta_hi",
        window.map(|w| w.zeta_hi),
        numeric_window.map(|w| Ok(w.zeta_hi)),
        false,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn complete_examples() {
        assert_eq!(complete_scaled(5).unwrap(), 0.2);
        assert_eq!(complete_scaled(2).unwrap(), 0.5);
        assert_eq!(complete_scaled(100).unwrap(), 0.01);
        assert!(complete_scaled(1).is_err());
    }

    #[test]
    fn nearly_complete_examples() {
        let (kb, ks) = nearly_complete_scaled(4, 0.1).unwrap();
        assert!(close(ks, 1.2 / 5.8, 1e-15) && close(kb, 3.4 / 11.6, 1e-15));
        assert!(close(2.0 * kb + 2.0 * ks, 1.0, 1e-15));
        let (kb, ks) = nearly_complete_scaled(3, 0.1).unwrap();
        assert!(close(ks, 1.2 / 4.6, 1e-15) && close(kb, 2.2 / 4.6, 1e-15));
        assert!(close(nearly_complete_kb_unnormalized(4, 0.1).unwrap(), 0.396552, 1e-6));
        assert!(nearly_complete_scaled(2, 0.1).is_err());
        assert!(nearly_complete_scaled(5, 0.25).is_err());
    }

    #[test]
    fn star_examples() {
        let (kb, ks) = star_scaled(5, 0.1).unwrap();
        assert!(close(kb, 0.44, 1e-15) && close(ks, 0.14, 1e-15));
        let (kb, ks) = star_scaled(3, 1e-12).unwrap();
        assert!(close(kb, 0.5, 1e-9) && close(ks, 0.25, 1e-9));
        assert!(star_scaled(10, 0.4).is_err());
        assert!(close(star_leaf_link_scaled(4, 0.1).unwrap(), 2.29 / 8.96, 1e-15));
        assert!(close(star_leaf_link_scaled(5, 0.1).unwrap(), 2.38 / 11.5, 1e-15));
        assert!(star_leaf_link_scaled(3, 0.1).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert!(close(complete_stable_threshold(5, 0.1).unwrap(), 4.0 / 35.0, 1e-15));
        assert!(close(complete_stable_threshold(3, 0.1).unwrap(), 2.0 / 13.8, 1e-15));
        assert!(complete_is_stable(5, 0.1, 0.1).unwrap());
        assert!(!complete_is_stable(5, 0.1, 0.12).unwrap());
    }

    #[test]
    fn window_examples() {
        let w = star_window(5, 0.1).unwrap();
        assert!(close(w.delta_lo, 4.0 * (2.38 / 11.5 - 0.14), 1e-15));
        assert!(close(w.delta_lo, 0.267826, 1e-6));
        assert!(close(w.delta_hi, 0.56, 1e-15));
        assert!(close(w.zeta_hi, 0.385, 1e-15));
        assert!(w.is_meaningful());
        assert!(w.contains(0.3, 0.2));
        assert!(!w.contains(0.6, 0.2));
        assert!(!w.contains(0.2, 0.2));
        assert!(!w.contains(0.3, 0.4));
    }

    #[test]
    fn alpha_choice_resolves() {
        assert_eq!(AlphaChoice::Fixed(0.1).resolve(7), 0.1);
        assert_eq!(AlphaChoice::PerDegree(0.5).resolve(6), 0.1);
    }

    #[test]
    fn audit_skips_infeasible_points() {
        let report = verify_closed_forms(5..=5, &[AlphaChoice::Fixed(0.3)]);
        assert!(report.all_passed());
        assert!(report.skipped.iter().any(|s| s.check == "complete_k"));
        assert!(report.row("star_kb", 5, 0.3).is_some());
        let report = verify_closed_forms(5..=5, &[AlphaChoice::Fixed(1.5)]);
        assert!(report.rows.is_empty());
        assert_eq!(report.skipped[0].check, "all");
        let report = verify_closed_forms(3..=3, &[AlphaChoice::PerDegree(0.5)]);
        assert!(report.all_passed());
        assert!(report.skipped.iter().any(|s| s.check == "star_leaf_link_ks"));
    }
}
