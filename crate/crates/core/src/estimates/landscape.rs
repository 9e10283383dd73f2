//! Union of the admissible exponents of the effective-damping results at
//! `μ = 1` (`m = √(n²−1)/2`), taken over all admissible `γ` and `σ`.
//!
//! Endpoints are exact rationals. For each family the union over the
//! regularity parameter is computed in closed form:
//!
//! * energy: `(p₁, n/(n−2)]`, unbounded for `n = 2`, with `p₁ = (n+1)/(n−1)`;
//! * fractional: `1+2γ/(n−1) < p ≤ n/(n−2γ)` over `γ ∈ (1/2, 1)` gives
//!   `(n/(n−1), n/(n−2))`, unbounded for `n = 2`;
//! * intermediate: for `k = ⌈σ⌉` the upper bound `1+2/(n−2σ)` grows with `σ`,
//!   so `σ ∈ (k−1, k]` gives `(max{p₁, k}, 1+2/(n−2k)]` when `2k < n` and
//!   `(max{p₁, k}, ∞)` when `σ` can approach `n/2`;
//! * large regularity: `(max{p₁, ⌈n/2⌉}, ∞)`;
//! * sharp high regularity: `(max{p₁, n/2, 2}, ∞)`;
//! * high regularity: `(n/2 + 1, ∞)`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::registry::{Family, Setting, TheoremId};
use crate::error::{domain, Result};

type Q = Ratio<i64>;

/// Interval of `p` with rational endpoints; `upper = None` is `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalInterval {
    pub lower: Q,
    pub lower_inclusive: bool,
    pub upper: Option<Q>,
    pub upper_inclusive: bool,
}

impl RationalInterval {
    /// `(lower, upper]` or `(lower, ∞)`.
    pub fn open_closed(lower: Q, upper: Option<Q>) -> Self {
        Self {
            lower,
            lower_inclusive: false,
            upper,
            upper_inclusive: upper.is_some(),
        }
    }

    /// `(lower, upper)`.
    pub fn open(lower: Q, upper: Option<Q>) -> Self {
        Self {
            lower,
            lower_inclusive: false,
            upper,
            upper_inclusive: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self.upper {
            None => false,
            Some(u) => u < self.lower || (u == self.lower && !(self.lower_inclusive && self.upper_inclusive)),
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        let lo = to_f64(self.lower);
        let above = if self.lower_inclusive { p >= lo } else { p > lo };
        let below = match self.upper {
            None => true,
            Some(u) if self.upper_inclusive => p <= to_f64(u),
            Some(u) => p < to_f64(u),
        };
        above && below
    }

    fn upper_cmp(&self, other: &Self) -> Ordering {
        match (self.upper, other.upper) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b).then(self.upper_inclusive.cmp(&other.upper_inclusive)),
        }
    }

    /// Whether `next`, starting no earlier than `self`, overlaps or abuts it.
    fn joins(&self, next: &Self) -> bool {
        match self.upper {
            None => true,
            Some(u) => next.lower < u || (next.lower == u && (self.upper_inclusive || next.lower_inclusive)),
        }
    }
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_inclusive { '[' } else { '(' };
        match self.upper {
            None => write!(f, "{open}{}, ∞)", self.lower),
            Some(u) => write!(f, "{open}{}, {u}{}", self.lower, if self.upper_inclusive { ']' } else { ')' }),
        }
    }
}

impl Serialize for RationalInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalInterval", 7)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("lower_value", &to_f64(self.lower))?;
        st.serialize_field("lower_inclusive", &self.lower_inclusive)?;
        st.serialize_field("upper", &self.upper.map(|u| u.to_string()))?;
        st.serialize_field("upper_value", &self.upper.map(to_f64))?;
        st.serialize_field("upper_inclusive", &self.upper_inclusive)?;
        st.end()
    }
}

/// Exponents admitted by one result, with the regularity that realises them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contribution {
    pub theorem: TheoremId,
    pub interval: RationalInterval,
    pub parameter: String,
}

/// Coverage and gaps of the admissible exponents in dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landscape {
    pub n: usize,
    pub coverage: Vec<RationalInterval>,
    pub gaps: Vec<RationalInterval>,
    pub contributions: Vec<Contribution>,
}

impl Landscape {
    pub fn covers(&self, p: f64) -> bool {
        self.coverage.iter().any(|i| i.contains(p))
    }

    /// Aligned text table of contributions followed by coverage and gaps.
    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 3]> = self
            .contributions
            .iter()
            .map(|c| [c.interval.to_string(), c.theorem.to_string(), c.parameter.clone()])
            .collect();
        let head = ["p interval", "result", "regularity"];
        let w: Vec<usize> = (0..3)
            .map(|j| rows.iter().map(|r| r[j].chars().count()).chain([head[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: [&str; 3]| {
            let mut s = String::new();
            for (j, c) in cells.iter().enumerate() {
                let pad = w[j] - c.chars().count();
                s.push_str(c);
                if j < 2 {
                    s.push_str(&" ".repeat(pad + 2));
                }
            }
            s.trim_end().to_string()
        };
        let mut out = format!("n = {}, μ = 1\n", self.n);
        out.push_str(&line(head));
        out.push('\n');
        for r in &rows {
            out.push_str(&line([&r[0], &r[1], &r[2]]));
            out.push('\n');
        }
        let join = |v: &[RationalInterval]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ∪ ");
        out.push_str(&format!("coverage: {}\n", join(&self.coverage)));
        let gaps = if self.gaps.is_empty() {
            "none".to_string()
        } else {
            join(&self.gaps)
        };
        out.push_str(&format!("gaps: {gaps}\n"));
        out
    }
}

fn id(family: Family) -> TheoremId {
    TheoremId::new(Setting::Effective, family).expect("registered effective result")
}

fn contributions(n: i64) -> Vec<Contribution> {
    let q = |a: i64, b: i64| Q::new(a, b);
    let int = Q::from_integer;
    let p1 = q(n + 1, n - 1);
    let half = q(n, 2);
    let mut out = Vec::new();
    let mut push = |family, interval: RationalInterval, parameter: String| {
        if !interval.is_empty() {
            out.push(Contribution {
                theorem: id(family),
                interval,
                parameter,
            });
        }
    };

    let energy_upper = (n >= 3).then(|| q(n, n - 2));
    push(Family::Energy, RationalInterval::open_closed(p1, energy_upper), "γ = 1".into());
    push(
        Family::Fractional,
        RationalInterval::open(q(n, n - 1), energy_upper),
        "γ ∈ (1/2, 1)".into(),
    );
    if n >= 3 {
        let mut k = 2;
        while int(k - 1) < half {
            let lower = p1.max(int(k));
            if 2 * k < n {
                let upper = q(n - 2 * k + 2, n - 2 * k);
                let range = format!("σ ∈ ({}, {k}]", k - 1);
                push(Family::Intermediate, RationalInterval::open_closed(lower, Some(upper)), range);
            } else {
                let range = format!("σ ∈ ({}, {half})", k - 1);
                push(Family::Intermediate, RationalInterval::open(lower, None), range);
            }
            k += 1;
        }
        let ceil_half = (n + 1) / 2;
        push(
            Family::LargeRegularity,
            RationalInterval::open(p1.max(int(ceil_half)), None),
            format!("σ ≥ {half}"),
        );
    }
    push(
        Family::HighRegularitySharp,
        RationalInterval::open(p1.max(half).max(int(2)), None),
        format!("σ ∈ ({half}, p)"),
    );
    push(
        Family::HighRegularity,
        RationalInterval::open(half + int(1), None),
        format!("σ ∈ ({half}, p − 1)"),
    );
    out
}

fn union(mut parts: Vec<RationalInterval>) -> Vec<RationalInterval> {
    parts.sort_by(|a, b| a.lower.cmp(&b.lower).then(b.lower_inclusive.cmp(&a.lower_inclusive)));
    let mut out: Vec<RationalInterval> = Vec::new();
    for p in parts {
        match out.last_mut() {
            Some(cur) if cur.joins(&p) => {
                if p.upper_cmp(cur) == Ordering::Greater {
                    cur.upper = p.upper;
                    cur.upper_inclusive = p.upper_inclusive;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

/// Admissible exponents at `μ = 1` in dimension `n ≥ 2`.
pub fn exponent_landscape(n: usize) -> Result<Landscape> {
    if n < 2 {
        return Err(domain(format!("the exponent landscape needs n ≥ 2, got {n}")));
    }
    let contributions = contributions(n as i64);
    let coverage = union(contributions.iter().map(|c| c.interval).collect());
    let gaps = coverage
        .windows(2)
        .filter_map(|w| {
            let upper = w[0].upper?;
            Some(RationalInterval {
                lower: upper,
                lower_inclusive: !w[0].upper_inclusive,
                upper: Some(w[1].lower),
                upper_inclusive: !w[1].lower_inclusive,
            })
        })
        .collect();
    Ok(Landscape {
        n,
        coverage,
        gaps,
        contributions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(v: &[RationalInterval]) -> Vec<String> {
        v.iter().map(|i| i.to_string()).collect()
    }

    #[test]
    fn union_merges_touching_pieces() {
        let q = Q::new;
        let u = union(vec![
            RationalInterval::open_closed(q(2, 1), Some(q(3, 1))),
            RationalInterval::open(q(3, 1), None),
            RationalInterval::open_closed(q(1, 1), Some(q(3, 2))),
        ]);
        assert_eq!(texts(&u), ["(1, 3/2]", "(2, ∞)"]);
        let u = union(vec![
            RationalInterval::open(q(1, 1), Some(q(2, 1))),
            RationalInterval::open(q(2, 1), None),
        ]);
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(texts(&exponent_landscape(2).unwrap().coverage), ["(2, ∞)"]);
        assert_eq!(texts(&exponent_landscape(3).unwrap().coverage), ["(3/2, ∞)"]);
        assert_eq!(texts(&exponent_landscape(4).unwrap().coverage), ["(4/3, ∞)"]);
        let l5 = exponent_landscape(5).unwrap();
        assert_eq!(texts(&l5.coverage), ["(5/4, 5/3]", "(2, ∞)"]);
        assert_eq!(texts(&l5.gaps), ["(5/3, 2]"]);
        assert!(exponent_landscape(1).is_err());
    }

    #[test]
    fn text_table_lists_gaps() {
        let t = exponent_landscape(5).unwrap().to_text();
        assert!(t.contains("gaps: (5/3, 2]"), "{t}");
        assert!(exponent_landscape(3).unwrap().to_text().contains("gaps: none"));
    }
}
