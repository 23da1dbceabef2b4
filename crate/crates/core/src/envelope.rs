//! Lower envelopes of affine lines over a closed interval.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{line_intersection, AffineLine, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub start: Rational,
    #[serde(flatten)]
    pub line: AffineLine,
}

/// Continuous concave piecewise-linear function on `[lo, hi]`.
///
/// Piece `i` is active on `[start_i, start_{i+1}]`; slopes strictly decrease.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseLinearConcave {
    domain: [Rational; 2],
    pieces: Vec<Piece>,
}

impl PiecewiseLinearConcave {
    pub fn lo(&self) -> &Rational {
        &self.domain[0]
    }

    pub fn hi(&self) -> &Rational {
        &self.domain[1]
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interior points where the slope changes.
    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.pieces[1..].iter().map(|p| &p.start)
    }

    pub fn piece_index(&self, lambda: &Rational) -> usize {
        // Last piece whose start is <= lambda.
        self.pieces
            .partition_point(|p| p.start <= *lambda)
            .saturating_sub(1)
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.pieces[self.piece_index(lambda)].line.eval(lambda)
    }

    /// Slope on `(λ, λ+ε)`; at `hi` this is the slope of the last piece.
    pub fn right_slope(&self, lambda: &Rational) -> &Rational {
        &self.pieces[self.piece_index(lambda)].line.slope
    }

    /// Slope on `(λ-ε, λ)`; at `lo` this is the slope of the first piece.
    pub fn left_slope(&self, lambda: &Rational) -> &Rational {
        let i = self.pieces.partition_point(|p| p.start < *lambda).saturating_sub(1);
        &self.pieces[i].line.slope
    }

    /// Leftmost maximizer and the maximum value.
    pub fn argmax(&self) -> (Rational, Rational) {
        let at = self
            .pieces
            .iter()
            .find(|p| !p.line.slope.is_positive())
            .map(|p| p.start.clone())
            .unwrap_or_else(|| self.hi().clone());
        let value = self.eval(&at);
        (at, value)
    }

    /// `k >= 2` evenly spaced samples as `lambda,value` CSV rows.
    pub fn sample_csv(&self, k: usize) -> String {
        let k = k.max(2);
        let mut out = String::from("lambda,value\n");
        let width = self.hi() - self.lo();
        for i in 0..k {
            let lambda = self.lo() + &(&width * &Rational::new(i as i64, (k - 1) as i64));
            out.push_str(&format!("{},{}\n", lambda.to_f64(), self.eval(&lambda).to_f64()));
        }
        out
    }

    /// Least `λ > from` at which this function meets or drops below `l`.
    ///
    /// A stretch starting at `from` on which the two coincide is skipped: the
    /// answer is then the point where the envelope first falls strictly below
    /// `l`. When it is strictly below immediately after `from`, `from` itself
    /// (the infimum) is returned.
    pub fn first_crossing(&self, l: &AffineLine, from: &Rational) -> Option<Rational> {
        if from >= self.hi() {
            return None;
        }
        let mut coinciding = true;
        let first = self.piece_index(from);
        for (i, piece) in self.pieces.iter().enumerate().skip(first) {
            let start = if i == first { from.clone() } else { piece.start.clone() };
            let end = self
                .pieces
                .get(i + 1)
                .map(|p| p.start.clone())
                .unwrap_or_else(|| self.hi().clone());
            let gap = &piece.line - l;
            let at_start = gap.eval(&start);
            if coinciding {
                if at_start.is_zero() && gap.slope.is_zero() {
                    continue;
                }
                coinciding = false;
                if at_start.is_negative() || (at_start.is_zero() && gap.slope.is_negative()) {
                    return Some(start);
                }
            } else if !at_start.is_positive() {
                return Some(start);
            }
            if gap.slope.is_negative() {
                let root = line_intersection(&piece.line, l).expect("non-parallel");
                if root <= end {
                    return Some(root);
                }
            }
        }
        None
    }
}

/// Pointwise minimum of `lines` over `[lo, hi]`.
pub fn lower_envelope(lines: &[AffineLine], lo: &Rational, hi: &Rational) -> Result<PiecewiseLinearConcave> {
    if lines.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    if lo >= hi {
        return Err(Error::domain(lo, hi));
    }
    // Steepest first; among equal slopes keep only the lowest line.
    let mut sorted: Vec<&AffineLine> = lines.iter().collect();
    sorted.sort_by(|a, b| b.slope.cmp(&a.slope).then_with(|| a.intercept.cmp(&b.intercept)));
    sorted.dedup_by(|b, a| a.slope == b.slope);

    // Hull over the whole real line: hull[i] is active on [starts[i], starts[i+1]].
    let mut hull: Vec<&AffineLine> = Vec::new();
    let mut starts: Vec<Option<Rational>> = Vec::new();
    for line in sorted {
        loop {
            match hull.last() {
                None => {
                    hull.push(line);
                    starts.push(None);
                    break;
                }
                Some(top) => {
                    let x = line_intersection(top, line).expect("distinct slopes");
                    match starts.last().unwrap() {
                        Some(s) if x <= *s => {
                            hull.pop();
                            starts.pop();
                        }
                        _ => {
                            hull.push(line);
                            starts.push(Some(x));
                            break;
                        }
                    }
                }
            }
        }
    }

    let mut pieces = Vec::new();
    for (i, line) in hull.iter().enumerate() {
        let end = starts.get(i + 1).cloned().flatten();
        if end.as_ref().is_some_and(|e| e <= lo) {
            continue;
        }
        let start = match &starts[i] {
            Some(s) if s > lo => s.clone(),
            _ => lo.clone(),
        };
        if start >= *hi {
            break;
        }
        pieces.push(Piece {
            start,
            line: (*line).clone(),
        });
    }
    Ok(PiecewiseLinearConcave {
        domain: [lo.clone(), hi.clone()],
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn l(a: i64, b: i64) -> AffineLine {
        AffineLine::from_ints(a, b)
    }

    #[test]
    fn three_line_example() {
        let env = lower_envelope(&[l(2, 0), l(1, 1), l(3, -1)], &q(0), &q(2)).unwrap();
        assert_eq!(
            env.pieces(),
            &[
                Piece { start: q(0), line: l(1, 1) },
                Piece { start: q(1), line: l(3, -1) }
            ]
        );
        assert_eq!(env.breakpoints().cloned().collect::<Vec<_>>(), vec![q(1)]);
        assert_eq!(env.argmax(), (q(1), q(2)));
    }

    #[test]
    fn single_and_duplicate_lines() {
        let env = lower_envelope(&[l(5, 0)], &q(0), &q(1)).unwrap();
        assert_eq!(env.pieces().len(), 1);
        let env = lower_envelope(&[l(0, 1), l(0, 1)], &q(0), &q(1)).unwrap();
        assert_eq!(env.pieces(), &[Piece { start: q(0), line: l(0, 1) }]);
    }

    #[test]
    fn errors() {
        assert_eq!(lower_envelope(&[], &q(0), &q(1)), Err(Error::EmptyLineSet));
        assert!(matches!(lower_envelope(&[l(1, 0)], &q(1), &q(1)), Err(Error::InvalidDomain { .. })));
    }

    #[test]
    fn clipping_drops_pieces_outside_domain() {
        // min(λ, 2, 6-λ) on [3, 5] is only the constant 2 then 6-λ from 4.
        let env = lower_envelope(&[l(0, 1), l(2, 0), l(6, -1)], &q(3), &q(5)).unwrap();
        assert_eq!(
            env.pieces(),
            &[Piece { start: q(3), line: l(2, 0) }, Piece { start: q(4), line: l(6, -1) }]
        );
        // Breakpoint exactly at the domain end is not a piece.
        let env = lower_envelope(&[l(0, 1), l(2, 0)], &q(0), &q(2)).unwrap();
        assert_eq!(env.pieces().len(), 1);
    }

    #[test]
    fn first_crossing_examples() {
        let env = lower_envelope(&[l(2, 0), l(1, 1), l(3, -1)], &q(0), &q(3)).unwrap();
        assert_eq!(env.first_crossing(&l(1, 1), &q(0)), Some(q(1)));

        let env = lower_envelope(&[l(5, 0)], &q(0), &q(1)).unwrap();
        assert_eq!(env.first_crossing(&l(4, 0), &q(0)), None);

        let env = lower_envelope(&[l(3, 0)], &q(0), &q(10)).unwrap();
        assert_eq!(env.first_crossing(&l(1, 1), &q(0)), Some(q(2)));
    }

    #[test]
    fn first_crossing_edge_cases() {
        // Coincides on the whole domain: no crossing.
        let env = lower_envelope(&[l(1, 1)], &q(0), &q(4)).unwrap();
        assert_eq!(env.first_crossing(&l(1, 1), &q(0)), None);
        // Meets the line exactly at the domain end.
        let env = lower_envelope(&[l(3, 0)], &q(0), &q(2)).unwrap();
        assert_eq!(env.first_crossing(&l(1, 1), &q(0)), Some(q(2)));
        // Already below right after the start.
        let env = lower_envelope(&[l(1, 0)], &q(0), &q(2)).unwrap();
        assert_eq!(env.first_crossing(&l(1, 1), &q(0)), Some(q(0)));
        // Starting inside a later piece.
        let env = lower_envelope(&[l(1, 1), l(3, -1)], &q(0), &q(3)).unwrap();
        assert_eq!(env.first_crossing(&l(0, 1), &q(1)), Some(Rational::new(3, 2)));
    }

    fn lines_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-1000i64..=1000, -1000i64..=1000), 1..=50)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_pointwise_min(raw in lines_strategy(), samples in prop::collection::vec((0i64..=1000, 1i64..=97), 100)) {
            let lines: Vec<AffineLine> = raw.iter().map(|&(a, b)| l(a, b)).collect();
            let (lo, hi) = (q(-10), q(10));
            let env = lower_envelope(&lines, &lo, &hi).unwrap();
            for w in env.pieces().windows(2) {
                prop_assert!(w[1].line.slope < w[0].line.slope);
                prop_assert!(w[0].start < w[1].start);
                prop_assert_eq!(w[0].line.eval(&w[1].start), w[1].line.eval(&w[1].start));
            }
            for (num, den) in samples {
                let x = &lo + &(&(&hi - &lo) * &Rational::new(num, 1000 * den).min(Rational::one()));
                let direct = lines.iter().map(|ln| ln.eval(&x)).min().unwrap();
                prop_assert_eq!(env.eval(&x), direct);
            }
        }

        #[test]
        fn first_crossing_is_tight(raw in lines_strategy(), a in -1000i64..1000, b in -100i64..100, from in 0i64..10) {
            let lines: Vec<AffineLine> = raw.iter().map(|&(a, b)| l(a, b)).collect();
            let env = lower_envelope(&lines, &q(0), &q(10)).unwrap();
            let probe = l(a, b);
            let from = q(from);
            let strict_start = env.eval(&from) > probe.eval(&from);
            if let Some(x) = env.first_crossing(&probe, &from) {
                prop_assert!(x >= from);
                if x > from {
                    prop_assert!(env.eval(&x) <= probe.eval(&x));
                } else {
                    prop_assert!(env.eval(&from) <= probe.eval(&from));
                }
                for k in (1..20).filter(|_| x > from) {
                    let y = &from + &(&(&x - &from) * &Rational::new(k, 20));
                    if strict_start {
                        prop_assert!(env.eval(&y) > probe.eval(&y));
                    } else {
                        prop_assert!(env.eval(&y) >= probe.eval(&y));
                    }
                }
            } else if strict_start {
                for k in 0..=20 {
                    let y = &from + &(&(q(10) - &from) * &Rational::new(k, 20));
                    prop_assert!(env.eval(&y) > probe.eval(&y));
                }
            }
        }
    }
}
