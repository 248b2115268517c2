use std::path::Path;

use crate::baselines::SchemeId;
use crate::error::{Error, Result};
use crate::harness::{SweepKind, SweepResult};

pub const HEADER: [&str; 7] = [
    "scheme",
    "sweep_kind",
    "swept_value",
    "mean_se",
    "std_se",
    "trials",
    "master_seed",
];

/// Shortest decimal that parses back to the same `f64`; never uses an
/// exponent, so every digit carried by the value is written out.
fn fmt_real(x: f64) -> String {
    format!("{x}")
}

pub fn write_csv_to<W: std::io::Write>(rows: &[SweepResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.name().to_string(),
            r.kind.name().to_string(),
            fmt_real(r.swept_value),
            fmt_real(r.mean_se),
            fmt_real(r.std_se),
            r.trials.to_string(),
            r.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(rows: &[SweepResult], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv_to(rows, std::io::BufWriter::new(file))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<SweepResult>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(Error::Csv(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let bad = |what: &str| Error::Csv(format!("row {row}: bad {what} `{}`", field(HEADER.iter().position(|h| *h == what).unwrap_or(0))));
        let real = |k: usize, what: &str| field(k).parse::<f64>().map_err(|_| bad(what));
        rows.push(SweepResult {
            scheme: field(0).parse::<SchemeId>().map_err(|_| bad("scheme"))?,
            kind: field(1).parse::<SweepKind>().map_err(|_| bad("sweep_kind"))?,
            swept_value: real(2, "swept_value")?,
            mean_se: real(3, "mean_se")?,
            std_se: real(4, "std_se")?,
            trials: field(5).parse().map_err(|_| bad("trials"))?,
            master_seed: field(6).parse().map_err(|_| bad("master_seed"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(scheme: SchemeId, value: f64, mean: f64) -> SweepResult {
        SweepResult {
            scheme,
            kind: SweepKind::Power,
            swept_value: value,
            mean_se: mean,
            std_se: 0.125,
            trials: 200,
            master_seed: u64::MAX,
        }
    }

    #[test]
    fn empty_rows_write_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_csv(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "scheme,sweep_kind,swept_value,mean_se,std_se,trials,master_seed\n"
        );
        assert!(read_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn one_row_per_result() {
        let mut rows = Vec::new();
        for s in [SchemeId::Proposed, SchemeId::DmaFullRf, SchemeId::FullyDigital] {
            for v in [-10.0, -5.0, 0.0, 5.0, 10.0] {
                rows.push(row(s, v, 7.25));
            }
        }
        let mut buf = Vec::new();
        write_csv_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 16);
        assert!(text.contains("proposed,power,-10,7.25,0.125,200,18446744073709551615"));
    }

    #[test]
    fn precision_is_kept_without_exponents() {
        let r = row(SchemeId::Proposed, 2.5, 1.0 / 3.0);
        let mut buf = Vec::new();
        write_csv_to(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let mean = line.split(',').nth(3).unwrap();
        assert!(mean.len() >= 14, "{mean}");
        assert!(!mean.contains('e'));
    }

    #[test]
    fn malformed_rows_name_the_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(
            &path,
            "scheme,sweep_kind,swept_value,mean_se,std_se,trials,master_seed\nproposed,power,0,x,0,1,1\n",
        )
        .unwrap();
        let err = read_csv(&path).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            value in -1e6f64..1e6,
            mean in 0f64..40.0,
            std in 0f64..10.0,
            tiny in 1e-300f64..1e-280,
            trials in 1usize..100_000,
            seed in any::<u64>(),
            scheme in 0usize..6,
            rf in any::<bool>(),
        ) {
            let rows = vec![
                SweepResult {
                    scheme: SchemeId::ALL[scheme],
                    kind: if rf { SweepKind::Rf } else { SweepKind::Power },
                    swept_value: value,
                    mean_se: mean,
                    std_se: std,
                    trials,
                    master_seed: seed,
                },
                SweepResult { std_se: tiny, ..row(SchemeId::Proposed, 0.0, 0.0) },
            ];
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("rows.csv");
            write_csv(&rows, &path).unwrap();
            prop_assert_eq!(read_csv(&path).unwrap(), rows);
        }
    }
}
