use std::fmt::Write as _;
use std::path::Path;

use crate::dominance::dominates;
use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::solution::ObjectiveVector;

/// Reference points on a constrained Pareto front; nonempty and mutually
/// nondominated.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFront {
    points: Vec<ObjectiveVector>,
}

impl ReferenceFront {
    pub fn new(points: Vec<ObjectiveVector>) -> Result<Self> {
        validate(&points).map_err(Error::Contract)?;
        Ok(Self { points })
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_obj(&self) -> usize {
        self.points[0].len()
    }

    /// Componentwise maximum (the front's nadir).
    pub fn nadir(&self) -> Vec<f64> {
        let mut out = self.points[0].to_vec();
        for p in &self.points[1..] {
            for (o, v) in out.iter_mut().zip(p.iter()) {
                *o = o.max(*v);
            }
        }
        out
    }

    /// Reads a headerless CSV with one objective vector per line.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ingest = |message: String| Error::Ingestion {
            path: path.to_path_buf(),
            message,
        };
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let values = line
                .split(',')
                .map(|field| field.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| ingest(format!("line {}: {e}", lineno + 1)))?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(ingest(format!("line {}: non-finite value", lineno + 1)));
            }
            points.push(ObjectiveVector::new(values));
        }
        validate(&points).map_err(ingest)?;
        Ok(Self { points })
    }

    /// The CSV text accepted by [`ReferenceFront::from_csv`].
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

fn validate(points: &[ObjectiveVector]) -> std::result::Result<(), String> {
    let Some(first) = points.first() else {
        return Err("reference front is empty".into());
    };
    let m = first.len();
    if m == 0 {
        return Err("reference points have no objectives".into());
    }
    if let Some(i) = points.iter().position(|p| p.len() != m) {
        return Err(format!(
            "row {} has {} columns, expected {m}",
            i + 1,
            points[i].len()
        ));
    }
    let mut offenders = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let dominated = points.iter().any(|q| dominates(q, p));
        let duplicate = points[..i].iter().any(|q| q == p);
        if dominated || duplicate {
            offenders.push(i + 1);
        }
    }
    if !offenders.is_empty() {
        return Err(format!("dominated or duplicate rows: {offenders:?}"));
    }
    Ok(())
}

/// Reference front for `problem`: the contents of `file` when given,
/// otherwise `n_points` samples from the problem's analytic front.
pub fn sample_reference_front(
    problem: &dyn Problem,
    n_points: usize,
    file: Option<&Path>,
) -> Result<ReferenceFront> {
    if let Some(path) = file {
        return ReferenceFront::from_csv(path);
    }
    if n_points == 0 {
        return Err(Error::Config(
            "reference front needs at least one point".into(),
        ));
    }
    let points = problem.sample_front(n_points).ok_or_else(|| {
        Error::Config(format!(
            "{} has no analytic front; supply a reference front file",
            problem.name()
        ))
    })?;
    ReferenceFront::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{build_problem, BcBand, ProblemOptions};
    use std::io::Write;

    #[test]
    fn analytic_band_front() {
        let band = BcBand::new(3).unwrap();
        let front = sample_reference_front(&band, 3, None).unwrap();
        assert_eq!(front.len(), 3);
        assert_eq!(&*front.points()[1], &[0.5, 0.5]);
        assert_eq!(front.nadir(), vec![1.0, 1.0]);
    }

    #[test]
    fn missing_front_source_is_config_error() {
        let mw = build_problem("mw13_bc", &ProblemOptions::default()).unwrap();
        assert!(matches!(
            sample_reference_front(mw.as_ref(), 100, None),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn csv_passthrough() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "0.25,0.75\n0.75,0.25").unwrap();
        let mw = build_problem("mw13_bc", &ProblemOptions::default()).unwrap();
        let front = sample_reference_front(mw.as_ref(), 0, Some(file.path())).unwrap();
        assert_eq!(front.len(), 2);
        assert_eq!(&*front.points()[0], &[0.25, 0.75]);
        let again = front.to_csv();
        assert_eq!(again, "0.25,0.75\n0.75,0.25\n");
    }

    #[test]
    fn csv_with_dominated_rows_lists_offenders() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "0,1\n1,0\n1,1\n0,1").unwrap();
        match ReferenceFront::from_csv(file.path()) {
            Err(Error::Ingestion { message, .. }) => {
                assert!(message.contains("[3, 4]"), "{message}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_garbage_and_empty() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "0,abc").unwrap();
        assert!(matches!(
            ReferenceFront::from_csv(file.path()),
            Err(Error::Ingestion { .. })
        ));
        let empty = tempfile::NamedTempFile::new().unwrap();
        assert!(matches!(
            ReferenceFront::from_csv(empty.path()),
            Err(Error::Ingestion { .. })
        ));
    }
}
