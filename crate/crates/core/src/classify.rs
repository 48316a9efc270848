//! Rule-based CM classification of arrangements `X_lambda` and their quotients.
//!
//! Rules are tried in a fixed order; every applicable rule is recorded in the
//! trace and each verdict cites the first rule that decided it. Conjectures
//! never decide a verdict; they are only reported as annotations.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{AcmError, Result};
use crate::partition::Partition;
use crate::scalar::rat;
use crate::sweep::b_bar;
use crate::verdict::{Certainty, RuleRef, Status, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "X")]
    Arrangement,
    #[serde(rename = "X/S_n")]
    Quotient,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Arrangement => "X",
            Target::Quotient => "X/S_n",
        })
    }
}

/// Rule identifiers with their citations.
pub mod rules {
    pub const AT_MOST_TWO_PARTS: (&str, &str) = (
        "at-most-two-parts",
        "with at most two parts the reduced arrangement is a curve, so X is CM",
    );
    pub const EQUAL_PARTS: (&str, &str) = (
        "equal-parts",
        "all parts equal: X is CM, and hence so is X/S_n",
    );
    pub const M_R_ONE_S: (&str, &str) = (
        "m^r-1^s",
        "for (m^r,1^s) with m>1, X and X/S_n are CM exactly when m<=2 or s<m",
    );
    pub const RESCALE: (&str, &str) = (
        "rescale",
        "X/S_n is unchanged when all parts are divided by a common factor",
    );
    pub const TWO_PART_BAD_SET: (&str, &str) = (
        "two-parts-bad-ratio",
        "for (m^r,p^s) with m/p=b/c in lowest terms, p>1, c<=r and 3<=b<=s, X/S_n is not CM, and hence neither is X",
    );
    pub const FOUR_TWO_TWO: (&str, &str) = ("4-2-2", "X is CM for (4,2,2) by a regular sequence of 3 linear forms");
    pub const THREE_TWO: (&str, &str) = (
        "3^r-2^s",
        "X is not CM for (3^r,2^s) with r,s>=1 and r+s>=3 (computed numerators of (3,2,2) and (3,3,2) with part removal)",
    );
    pub const FIVE_TWO: (&str, &str) = (
        "5^r-2^s",
        "X is not CM for (5^r,2^s) with r>=1, s>=2 (computed numerator of (5,2,2) with part removal)",
    );
    pub const EQUAL_PAIR_SLICE: (&str, &str) = (
        "equal-pair-slice",
        "three parts with exactly two equal: the slice algebra with weights (a,a,1) is CM for a other than -1 and -1/2",
    );
    pub const B_PLUS_ONE: (&str, &str) = (
        "b+1-b-1",
        "for (b+1,b,1) with integer b>=3 the slice algebra is free over P2,P3 with numerator 1+t^4+t^5+t^6+t^7+t^8",
    );
    pub const B_PLUS_ONE_ONE_ONE: (&str, &str) = (
        "b+1-b-1-1",
        "for (b+1,b,1,1) with integer b>=4 the slice algebra is free of rank 12 over P2,P3,P4",
    );
    pub const THREE_TWO_ONE: (&str, &str) = (
        "3-2-1",
        "the slice algebra with weights (3,2,1) has numerator coefficients summing past its generic rank 6, so X/S_n is not CM",
    );
    pub const FOUR_DISTINCT: (&str, &str) = (
        "four-distinct-parts",
        "at least four distinct parts: X/S_n is not CM, and hence neither is X",
    );
    pub const THREE_DISTINCT: (&str, &str) = (
        "three-distinct-parts",
        "three distinct parts a>b>c with a!=b+c: X/S_n is not CM, and hence neither is X",
    );
    pub const SUM_PART: (&str, &str) = ("b+c-b^r-c^s", "for (b+c,b^r,c^s) with b>c, X is not CM");
    pub const PART_REMOVAL: (&str, &str) = (
        "part-removal",
        "if a part is not a sum of two or more of the remaining parts, non-CM-ness of the remaining partition carries over",
    );
    pub const QUOTIENT_OF_CM: (&str, &str) = (
        "quotient-of-cm",
        "the invariants of a CM ring under a finite group are CM, so X CM implies X/S_n CM",
    );
    pub const NO_RULE: (&str, &str) = ("no-rule", "no proved rule settles this case");
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: String,
    pub target: Target,
    pub input: Partition,
    /// Terminal status, or a note on the reduction performed.
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub lambda: Partition,
    pub arrangement: Verdict,
    pub quotient: Verdict,
    pub trace: Vec<TraceEntry>,
    /// Predictions of unproved conjectures, when requested.
    pub conjectures: Vec<String>,
}

impl Classification {
    pub fn verdict(&self, t: Target) -> &Verdict {
        match t {
            Target::Arrangement => &self.arrangement,
            Target::Quotient => &self.quotient,
        }
    }
}

#[derive(Clone, Debug)]
struct Finding {
    rule: RuleRef,
    target: Target,
    status: Status,
}

fn finding(rule: (&str, &str), target: Target, status: Status) -> Finding {
    Finding {
        rule: RuleRef::new(rule.0, rule.1),
        target,
        status,
    }
}

/// Whether `target` is a sum of at least two of `parts` (with multiplicity).
pub fn is_sum_of_two_or_more(target: u32, parts: &[u32]) -> bool {
    // can[v][k]: some sub-multiset with k parts (k capped at 2) sums to v.
    let t = target as usize;
    let mut can = vec![[false; 3]; t + 1];
    can[0][0] = true;
    for &p in parts {
        let p = p as usize;
        for v in (p..=t).rev() {
            for k in 0..3 {
                if can[v - p][k] {
                    can[v][(k + 1).min(2)] = true;
                }
            }
        }
    }
    can[t][2]
}

/// Multiplicities of `lambda` as `(part, count)` in decreasing part order.
fn groups(lambda: &Partition) -> Vec<(u32, usize)> {
    let mut g = lambda.multiplicities();
    g.sort_by(|a, b| b.0.cmp(&a.0));
    g
}

#[derive(Default)]
struct Classifier {
    memo: HashMap<Partition, Classification>,
}

impl Classifier {
    fn classify(&mut self, lambda: &Partition) -> Result<Classification> {
        if let Some(c) = self.memo.get(lambda) {
            return Ok(c.clone());
        }
        let c = self.compute(lambda)?;
        self.memo.insert(lambda.clone(), c.clone());
        Ok(c)
    }

    fn compute(&mut self, lambda: &Partition) -> Result<Classification> {
        use Status::{Cm, NotCm};
        use Target::{Arrangement as X, Quotient as Q};
        let parts = lambda.parts();
        let r = parts.len();
        let g = groups(lambda);
        let mut found: Vec<Finding> = Vec::new();
        let mut trace: Vec<TraceEntry> = Vec::new();

        // (1) at most two parts.
        if r <= 2 {
            found.push(finding(rules::AT_MOST_TWO_PARTS, X, Cm));
        }
        // (2) all parts equal.
        if g.len() == 1 {
            found.push(finding(rules::EQUAL_PARTS, X, Cm));
            found.push(finding(rules::EQUAL_PARTS, Q, Cm));
        }
        // (3) (m^r, 1^s).
        if g.len() == 2 && g[1].0 == 1 {
            let (m, s) = (g[0].0, g[1].1 as u32);
            let status = if m <= 2 || s < m { Cm } else { NotCm };
            found.push(finding(rules::M_R_ONE_S, X, status));
            found.push(finding(rules::M_R_ONE_S, Q, status));
        }
        // (4) quotient rescaling.
        let k = lambda.gcd();
        if k > 1 {
            let reduced = lambda.scaled_down(k);
            let sub = self.classify(&reduced)?;
            trace.push(TraceEntry {
                rule: rules::RESCALE.0.into(),
                target: Q,
                input: lambda.clone(),
                outcome: format!("reduce to {reduced}"),
            });
            if sub.quotient.is_decided() {
                trace.extend(sub.trace.iter().filter(|t| t.target == Q).cloned());
                let why = format!("{}; {reduced} is decided by {}", rules::RESCALE.1, sub.quotient.rules[0].id);
                found.push(Finding {
                    rule: RuleRef::new(rules::RESCALE.0, why),
                    target: Q,
                    status: sub.quotient.status,
                });
            }
        }
        // (5) two distinct parts with a bad ratio.
        if g.len() == 2 && g[1].0 > 1 {
            let ((m, rr), (p, ss)) = (g[0], g[1]);
            let d = m.gcd(&p);
            let (b, c) = (m / d, p / d);
            if c as usize <= rr && 3 <= b && b as usize <= ss {
                found.push(finding(rules::TWO_PART_BAD_SET, Q, NotCm));
                found.push(finding(rules::TWO_PART_BAD_SET, X, NotCm));
            }
        }
        // (6) explicit cases.
        if parts == [4, 2, 2] {
            found.push(finding(rules::FOUR_TWO_TWO, X, Cm));
        }
        if g.len() == 2 && g[0].0 == 3 && g[1].0 == 2 && r >= 3 {
            found.push(finding(rules::THREE_TWO, X, NotCm));
        }
        if g.len() == 2 && g[0].0 == 5 && g[1].0 == 2 && g[1].1 >= 2 {
            found.push(finding(rules::FIVE_TWO, X, NotCm));
        }
        if r == 3 && g.len() == 2 {
            found.push(finding(rules::EQUAL_PAIR_SLICE, Q, Cm));
        }
        if r == 3 && parts[2] == 1 && parts[0] == parts[1] + 1 && parts[1] >= 3 {
            found.push(finding(rules::B_PLUS_ONE, Q, Cm));
        }
        if r == 4 && parts[2] == 1 && parts[3] == 1 && parts[0] == parts[1] + 1 && parts[1] >= 4 {
            found.push(finding(rules::B_PLUS_ONE_ONE_ONE, Q, Cm));
        }
        if parts == [3, 2, 1] {
            found.push(finding(rules::THREE_TWO_ONE, Q, NotCm));
        }
        // (7) at least four distinct parts.
        if g.len() >= 4 {
            found.push(finding(rules::FOUR_DISTINCT, Q, NotCm));
            found.push(finding(rules::FOUR_DISTINCT, X, NotCm));
        }
        // (8) three distinct parts a > b > c with a != b + c.
        if g.len() == 3 && g[0].0 != g[1].0 + g[2].0 {
            found.push(finding(rules::THREE_DISTINCT, Q, NotCm));
            found.push(finding(rules::THREE_DISTINCT, X, NotCm));
        }
        // (9) (b+c, b^r, c^s).
        if g.len() == 3 && g[0].1 == 1 && g[0].0 == g[1].0 + g[2].0 {
            found.push(finding(rules::SUM_PART, X, NotCm));
        }
        // (10) part removal.
        if r >= 2 {
            for &(l, _) in &g {
                let Some(rest) = lambda.without_part(l) else { continue };
                if is_sum_of_two_or_more(l, rest.parts()) {
                    continue;
                }
                let sub = self.classify(&rest)?;
                for t in [X, Q] {
                    if sub.verdict(t).status == NotCm {
                        trace.push(TraceEntry {
                            rule: rules::PART_REMOVAL.0.into(),
                            target: t,
                            input: lambda.clone(),
                            outcome: format!("remove {l}, leaving {rest}"),
                        });
                        trace.extend(sub.trace.iter().filter(|e| e.target == t).cloned());
                        let why = format!(
                            "{}; removing {l} leaves {rest}, not CM by {}",
                            rules::PART_REMOVAL.1,
                            sub.verdict(t).rules[0].id
                        );
                        found.push(Finding {
                            rule: RuleRef::new(rules::PART_REMOVAL.0, why),
                            target: t,
                            status: NotCm,
                        });
                    }
                }
            }
        }
        // Transfer between X and X/S_n.
        if found.iter().any(|f| f.target == X && f.status == Cm) {
            found.push(finding(rules::QUOTIENT_OF_CM, Q, Cm));
        }
        if let Some(f) = found.iter().find(|f| f.target == Q && f.status == NotCm) {
            let rule = f.rule.clone();
            found.push(Finding {
                rule,
                target: X,
                status: NotCm,
            });
        }

        for f in &found {
            trace.push(TraceEntry {
                rule: f.rule.id.clone(),
                target: f.target,
                input: lambda.clone(),
                outcome: f.status.to_string(),
            });
        }
        let decide = |t: Target| -> Result<Verdict> {
            let mine: Vec<&Finding> = found.iter().filter(|f| f.target == t).collect();
            match mine.first() {
                None => Ok(Verdict::new(
                    Status::Unknown,
                    Certainty::TheoremCited,
                    vec![RuleRef::new(rules::NO_RULE.0, rules::NO_RULE.1)],
                )),
                Some(first) => {
                    if let Some(bad) = mine.iter().find(|f| f.status != first.status) {
                        return Err(AcmError::Inconsistency(format!(
                            "{lambda} {t}: rule {} gives {} but rule {} gives {}",
                            first.rule.id, first.status, bad.rule.id, bad.status
                        )));
                    }
                    let mut cited: Vec<RuleRef> = Vec::new();
                    for f in &mine {
                        if !cited.contains(&f.rule) {
                            cited.push(f.rule.clone());
                        }
                    }
                    Ok(Verdict::new(first.status, Certainty::TheoremCited, cited))
                }
            }
        };
        Ok(Classification {
            lambda: lambda.clone(),
            arrangement: decide(X)?,
            quotient: decide(Q)?,
            trace,
            conjectures: Vec::new(),
        })
    }
}

/// Classify `X_lambda` and `X_lambda/S_n` by the proved rules.
pub fn classify(lambda: &Partition) -> Result<Classification> {
    Classifier::default().classify(lambda)
}

/// As [`classify`], annotated with conjectural predictions for undecided targets.
pub fn classify_with_conjectures(lambda: &Partition) -> Result<Classification> {
    let mut c = classify(lambda)?;
    c.conjectures = conjecture_notes(lambda, &c);
    Ok(c)
}

fn conjecture_notes(lambda: &Partition, c: &Classification) -> Vec<String> {
    let g = groups(lambda);
    let parts = lambda.parts();
    let mut out = Vec::new();
    if !c.arrangement.is_decided() && g.len() >= 3 {
        out.push("conjecture (unproved): X is not CM whenever lambda has at least three distinct parts".into());
    }
    if !c.quotient.is_decided() && g.len() == 2 {
        let ((m, r), (p, s)) = (g[0], g[1]);
        let d = m.gcd(&p);
        let a = rat((m / d) as i64, (p / d) as i64);
        let bad = b_bar(r, s).contains(&a);
        out.push(format!(
            "conjecture (unproved): the bad set for (r,s)=({r},{s}) is exactly the predicted one, so X/S_n would be {}",
            if bad { "not CM" } else { "CM" }
        ));
    }
    let ones = parts.iter().filter(|&&x| x == 1).count();
    if !c.quotient.is_decided() && g.len() >= 2 && parts.len() == ones + 2 && parts[0] == parts[1] + 1 && parts[1] > 1 {
        let b = parts[1] as usize;
        let exceptional = b <= ones + 1;
        out.push(format!(
            "conjecture (unproved): (b+1,b,1^s) gives a CM quotient for b outside {{p/q: 1<=p<=s+1, q<=2}}; here b={b}, s={ones}, so X/S_n would be {}",
            if exceptional { "an exceptional case" } else { "CM" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn sums_of_two_or_more() {
        assert!(is_sum_of_two_or_more(4, &[3, 1]));
        assert!(!is_sum_of_two_or_more(3, &[3, 1]));
        assert!(is_sum_of_two_or_more(2, &[1, 1]));
        assert!(!is_sum_of_two_or_more(1, &[1, 1]));
        assert!(!is_sum_of_two_or_more(5, &[3, 3]));
        assert!(is_sum_of_two_or_more(6, &[3, 3]));
    }

    #[test]
    fn removal_of_repeated_parts() {
        let c = classify(&part("3,3,2,2,2")).unwrap();
        assert_eq!(c.arrangement.status, Status::NotCm);
    }

    #[test]
    fn deterministic() {
        let a = classify(&part("6,4,2,2,1")).unwrap();
        let b = classify(&part("6,4,2,2,1")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn total_and_consistent_small() {
        for n in 1..=12 {
            for l in Partition::all(n) {
                classify(&l).unwrap();
            }
        }
    }
}
