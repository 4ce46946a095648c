//! Piecewise-constant 1D potential profiles.
//!
//! Lengths are in Å and energies in eV. A profile is an ordered list of
//! segments starting at `origin`; outside the segments the potential sits at
//! the asymptotic `left_level` / `right_level`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error("segment {index} has non-positive width {width}")]
    NonPositiveWidth { index: usize, width: f64 },
    #[error("segment {index} has non-finite height")]
    NonFiniteHeight { index: usize },
    #[error("a profile needs at least one segment")]
    Empty,
    #[error("invalid interval [{x1}, {x2}] or segment count {n}")]
    InvalidGrid { x1: f64, x2: f64, n: usize },
    #[error("non-finite asymptotic level or origin")]
    NonFiniteLevel,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    segments: Vec<Segment>,
    left_level: f64,
    right_level: f64,
    origin: f64,
}

impl PotentialProfile {
    pub fn new(
        segments: Vec<Segment>,
        left_level: f64,
        right_level: f64,
        origin: f64,
    ) -> Result<Self, PotentialError> {
        if segments.is_empty() {
            return Err(PotentialError::Empty);
        }
        for (index, s) in segments.iter().enumerate() {
            if !(s.width > 0.0) || !s.width.is_finite() {
                return Err(PotentialError::NonPositiveWidth { index, width: s.width });
            }
            if !s.height.is_finite() {
                return Err(PotentialError::NonFiniteHeight { index });
            }
        }
        if !(left_level.is_finite() && right_level.is_finite() && origin.is_finite()) {
            return Err(PotentialError::NonFiniteLevel);
        }
        Ok(Self { segments, left_level, right_level, origin })
    }

    /// Segments with both asymptotic levels at zero, starting at x = 0.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, PotentialError> {
        Self::new(segments, 0.0, 0.0, 0.0)
    }

    /// Single rectangular barrier of the given height (eV) and width (Å).
    pub fn rectangular(height: f64, width: f64) -> Result<Self, PotentialError> {
        Self::from_segments(vec![Segment { width, height }])
    }

    /// `n` equal-width segments on `[x1, x2]`, each at `f` of its midpoint.
    pub fn discretize<F>(f: F, x1: f64, x2: f64, n: usize) -> Result<Self, PotentialError>
    where
        F: Fn(f64) -> f64,
    {
        if !(x1 < x2) || n == 0 || !x1.is_finite() || !x2.is_finite() {
            return Err(PotentialError::InvalidGrid { x1, x2, n });
        }
        let width = (x2 - x1) / n as f64;
        let segments = (0..n).map(|i| Segment { width, height: f(x1 + (i as f64 + 0.5) * width) }).collect();
        Self::new(segments, 0.0, 0.0, x1)
    }

    /// Copy with every segment raised by `dv`; asymptotic levels untouched.
    pub fn shift_barrier(&self, dv: f64) -> Self {
        let segments =
            self.segments.iter().map(|s| Segment { width: s.width, height: s.height + dv }).collect();
        Self { segments, ..*self }
    }

    /// The profile reflected about its centre.
    pub fn mirrored(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().copied().collect(),
            left_level: self.right_level,
            right_level: self.left_level,
            origin: self.origin,
        }
    }

    /// Exact mirror symmetry, including the asymptotic levels.
    pub fn is_symmetric(&self) -> bool {
        self.left_level == self.right_level
            && self.segments.iter().zip(self.segments.iter().rev()).all(|(a, b)| a == b)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn left_level(&self) -> f64 {
        self.left_level
    }

    pub fn right_level(&self) -> f64 {
        self.right_level
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn total_width(&self) -> f64 {
        self.segments.iter().map(|s| s.width).sum()
    }

    /// Right edge of the barrier region, `origin + total_width`.
    pub fn end(&self) -> f64 {
        self.origin + self.total_width()
    }

    pub fn max_height(&self) -> f64 {
        self.segments.iter().map(|s| s.height).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Potential at `x`; interfaces belong to the segment on their right.
    pub fn value_at(&self, x: f64) -> f64 {
        if x < self.origin {
            return self.left_level;
        }
        let mut edge = self.origin;
        for s in &self.segments {
            edge += s.width;
            if x < edge {
                return s.height;
            }
        }
        self.right_level
    }

    /// Serialise to the `width_angstrom height_ev` line format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# width_angstrom height_ev\n");
        for s in &self.segments {
            let _ = writeln!(out, "{} {}", s.width, s.height);
        }
        out
    }
}

impl FromStr for PotentialProfile {
    type Err = PotentialError;

    /// Parses one `width_angstrom height_ev` pair per line; `#` starts a
    /// comment. Asymptotic levels are zero and the origin is x = 0.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| PotentialError::Parse { line: i + 1, message };
            if fields.len() != 2 {
                return Err(parse_err(format!("expected `width height`, got {} fields", fields.len())));
            }
            let width: f64 =
                fields[0].parse().map_err(|_| parse_err(format!("bad width `{}`", fields[0])))?;
            let height: f64 =
                fields[1].parse().map_err(|_| parse_err(format!("bad height `{}`", fields[1])))?;
            if !(width > 0.0) {
                return Err(parse_err(format!("width must be positive, got {width}")));
            }
            segments.push(Segment { width, height });
        }
        Self::from_segments(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangular_junction_barrier() {
        let p = PotentialProfile::rectangular(1.8, 20.8).unwrap();
        assert_eq!(p.segments(), &[Segment { width: 20.8, height: 1.8 }]);
        assert_eq!((p.left_level(), p.right_level(), p.origin()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_height_region() {
        let p = PotentialProfile::rectangular(0.0, 7.0).unwrap();
        assert_eq!(p.total_width(), 7.0);
        assert_eq!(p.max_height(), 0.0);
    }

    #[test]
    fn rejects_non_positive_width() {
        assert_eq!(
            PotentialProfile::rectangular(1.0, 0.0),
            Err(PotentialError::NonPositiveWidth { index: 0, width: 0.0 })
        );
        assert!(PotentialProfile::rectangular(1.0, -2.0).is_err());
        assert!(PotentialProfile::from_segments(vec![]).is_err());
    }

    #[test]
    fn shifted_rectangle() {
        let p = PotentialProfile::rectangular(1.5, 10.0).unwrap().shift_barrier(0.25);
        assert_eq!(p, PotentialProfile::rectangular(1.75, 10.0).unwrap());
        let q = PotentialProfile::rectangular(1.5, 10.0).unwrap();
        assert_eq!(q.shift_barrier(0.0), q);
    }

    #[test]
    fn successive_shifts_compose() {
        let p = PotentialProfile::rectangular(1.0, 4.0).unwrap();
        assert_eq!(p.shift_barrier(0.5).shift_barrier(0.25), p.shift_barrier(0.75));
    }

    #[test]
    fn shift_leaves_levels_alone() {
        let p = PotentialProfile::new(vec![Segment { width: 2.0, height: 1.0 }], -0.5, 0.3, 1.0).unwrap();
        let q = p.shift_barrier(2.0);
        assert_eq!((q.left_level(), q.right_level(), q.origin()), (-0.5, 0.3, 1.0));
    }

    #[test]
    fn discretize_constant() {
        let p = PotentialProfile::discretize(|_| 0.7, -3.0, 5.0, 9).unwrap();
        assert!(p.segments().iter().all(|s| s.height == 0.7));
        assert_eq!(p.origin(), -3.0);
    }

    #[test]
    fn discretize_ramp_midpoints() {
        let p = PotentialProfile::discretize(|x| x, 0.0, 1.0, 2).unwrap();
        let h: Vec<f64> = p.segments().iter().map(|s| s.height).collect();
        assert_eq!(h, vec![0.25, 0.75]);
    }

    #[test]
    fn discretize_rejects_bad_grid() {
        assert!(PotentialProfile::discretize(|x| x, 1.0, 1.0, 4).is_err());
        assert!(PotentialProfile::discretize(|x| x, 0.0, 1.0, 0).is_err());
        assert!(PotentialProfile::discretize(|x| 1.0 / x, 0.0, 1.0, 1).is_ok());
        assert!(PotentialProfile::discretize(|x| 1.0 / (x - 0.5), 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn symmetry_and_mirror() {
        let segs = vec![
            Segment { width: 1.0, height: 2.0 },
            Segment { width: 3.0, height: -1.0 },
            Segment { width: 1.0, height: 2.0 },
        ];
        let p = PotentialProfile::from_segments(segs).unwrap();
        assert!(p.is_symmetric());
        assert_eq!(p.mirrored(), p);
        let q = PotentialProfile::from_segments(vec![
            Segment { width: 1.0, height: 2.0 },
            Segment { width: 2.0, height: 1.0 },
        ])
        .unwrap();
        assert!(!q.is_symmetric());
        assert_eq!(q.mirrored().mirrored(), q);
    }

    #[test]
    fn value_lookup() {
        let p = PotentialProfile::new(
            vec![Segment { width: 1.0, height: 2.0 }, Segment { width: 1.0, height: 3.0 }],
            0.0,
            -1.0,
            5.0,
        )
        .unwrap();
        assert_eq!(p.value_at(4.9), 0.0);
        assert_eq!(p.value_at(5.5), 2.0);
        assert_eq!(p.value_at(6.5), 3.0);
        assert_eq!(p.value_at(7.5), -1.0);
    }

    #[test]
    fn text_format() {
        let p: PotentialProfile = "# barrier\n2.5 1.0\n\n 4 -0.5 # well\n".parse().unwrap();
        assert_eq!(p.segments().len(), 2);
        assert_eq!(p.segments()[1], Segment { width: 4.0, height: -0.5 });
        let back: PotentialProfile = p.to_text().parse().unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn text_format_errors_carry_line() {
        let err = "1.0 2.0\n1.0\n".parse::<PotentialProfile>().unwrap_err();
        assert!(matches!(err, PotentialError::Parse { line: 2, .. }));
        let err = "1.0 2.0\n-1.0 3\n".parse::<PotentialProfile>().unwrap_err();
        assert!(matches!(err, PotentialError::Parse { line: 2, .. }));
        assert_eq!("# nothing\n".parse::<PotentialProfile>(), Err(PotentialError::Empty));
    }

    proptest::proptest! {
        #[test]
        fn discretize_preserves_width(x1 in -50.0f64..50.0, len in 0.1f64..100.0, n in 1usize..300) {
            let p = PotentialProfile::discretize(|x| x.sin(), x1, x1 + len, n).unwrap();
            proptest::prop_assert!((p.total_width() - len).abs() <= 1e-12 * len.max(1.0));
            proptest::prop_assert_eq!(p.segments().len(), n);
        }

        #[test]
        fn shift_commutes_with_discretize(dv in -3.0f64..3.0, n in 1usize..64) {
            let f = |x: f64| (0.3 * x).cos();
            let a = PotentialProfile::discretize(f, -4.0, 6.0, n).unwrap().shift_barrier(dv);
            let b = PotentialProfile::discretize(|x| f(x) + dv, -4.0, 6.0, n).unwrap();
            for (sa, sb) in a.segments().iter().zip(b.segments()) {
                proptest::prop_assert_eq!(sa.width, sb.width);
                proptest::prop_assert!((sa.height - sb.height).abs() < 1e-15);
            }
        }
    }
}
