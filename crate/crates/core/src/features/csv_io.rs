use std::io::{Read, Write};

use super::{FeatureError, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
use crate::numfmt::format_real;

/// Exact header of a feature CSV.
pub const FEATURE_CSV_HEADER: &str = "name,category,nodes,edges,density,max_degree,min_degree,avg_degree,assortativity,total_triangles,avg_triangles,max_triangles,avg_clustering_coeff,frac_closed_triangles,max_kcore,max_clique_lb,chromatic_number";

/// One line of a feature CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub name: String,
    /// `None` for unlabeled graphs (empty category cell).
    pub category: Option<String>,
    pub features: FeatureVector,
}

/// Writes rows under [`FEATURE_CSV_HEADER`]. Counts are written as integers
/// and reals with 17 significant digits.
pub fn write_feature_csv<W: Write>(rows: &[FeatureRow], out: W) -> Result<(), FeatureError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(FEATURE_CSV_HEADER.split(','))?;
    for row in rows {
        let f = &row.features;
        let int = |x: u64| x.to_string();
        w.write_record([
            row.name.clone(),
            row.category.clone().unwrap_or_default(),
            int(f.nodes),
            int(f.edges),
            format_real(f.density),
            int(f.max_degree),
            int(f.min_degree),
            format_real(f.avg_degree),
            format_real(f.assortativity),
            int(f.total_triangles),
            format_real(f.avg_triangles),
            int(f.max_triangles),
            format_real(f.avg_clustering_coeff),
            format_real(f.frac_closed_triangles),
            int(f.max_kcore),
            int(f.max_clique_lb),
            int(f.chromatic_number),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a feature CSV, rejecting any header other than
/// [`FEATURE_CSV_HEADER`].
pub fn read_feature_csv<R: Read>(input: R) -> Result<Vec<FeatureRow>, FeatureError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(rec) => rec?,
        None => {
            return Err(FeatureError::Header {
                expected: FEATURE_CSV_HEADER.into(),
                found: String::new(),
            })
        }
    };
    let found = header.iter().collect::<Vec<_>>().join(",");
    if found != FEATURE_CSV_HEADER {
        return Err(FeatureError::Header {
            expected: FEATURE_CSV_HEADER.into(),
            found,
        });
    }

    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != FEATURE_COUNT + 2 {
            return Err(FeatureError::Row {
                line,
                message: format!("expected {} fields, found {}", FEATURE_COUNT + 2, rec.len()),
            });
        }
        let mut values = [0.0f64; FEATURE_COUNT];
        for (i, slot) in values.iter_mut().enumerate() {
            let cell = &rec[i + 2];
            *slot = cell.trim().parse::<f64>().map_err(|_| FeatureError::Row {
                line,
                message: format!("{}: not a number: {cell:?}", FEATURE_NAMES[i]),
            })?;
            if !slot.is_finite() {
                return Err(FeatureError::Row {
                    line,
                    message: format!("{}: non-finite value", FEATURE_NAMES[i]),
                });
            }
        }
        let count = |i: usize| -> Result<u64, FeatureError> {
            let x = values[i];
            if x < 0.0 || x.fract() != 0.0 {
                return Err(FeatureError::Row {
                    line,
                    message: format!(
                        "{}: expected a non-negative integer, found {x}",
                        FEATURE_NAMES[i]
                    ),
                });
            }
            Ok(x as u64)
        };
        let features = FeatureVector {
            nodes: count(0)?,
            edges: count(1)?,
            density: values[2],
            max_degree: count(3)?,
            min_degree: count(4)?,
            avg_degree: values[5],
            assortativity: values[6],
            total_triangles: count(7)?,
            avg_triangles: values[8],
            max_triangles: count(9)?,
            avg_clustering_coeff: values[10],
            frac_closed_triangles: values[11],
            max_kcore: count(12)?,
            max_clique_lb: count(13)?,
            chromatic_number: count(14)?,
        };
        let category = match &rec[1] {
            "" => None,
            c => Some(c.to_owned()),
        };
        rows.push(FeatureRow {
            name: rec[0].to_owned(),
            category,
            features,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::extract_features;
    use crate::features::fixtures::*;

    fn rows() -> Vec<FeatureRow> {
        vec![
            FeatureRow {
                name: "k4".into(),
                category: Some("dense".into()),
                features: extract_features(&complete(4)).unwrap(),
            },
            FeatureRow {
                name: "p3, a path".into(),
                category: None,
                features: extract_features(&path(3)).unwrap(),
            },
        ]
    }

    #[test]
    fn header_matches_feature_names() {
        let names: Vec<&str> = FEATURE_CSV_HEADER.split(',').skip(2).collect();
        assert_eq!(names, FEATURE_NAMES);
    }

    #[test]
    fn exact_text() {
        let mut buf = Vec::new();
        write_feature_csv(&rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], FEATURE_CSV_HEADER);
        assert_eq!(lines[1], "k4,dense,4,6,1,3,3,3,0,4,3,3,1,1,3,4,4");
        assert_eq!(
            lines[2],
            "\"p3, a path\",,3,2,0.66666666666666663,2,1,1.3333333333333333,-1,0,0,0,0,0,1,2,2"
        );
    }

    #[test]
    fn round_trip() {
        let mut buf = Vec::new();
        write_feature_csv(&rows(), &mut buf).unwrap();
        assert_eq!(read_feature_csv(buf.as_slice()).unwrap(), rows());
    }

    #[test]
    fn wrong_header_names_expected() {
        let err = read_feature_csv("name,category,nodes\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains(FEATURE_CSV_HEADER));
    }

    #[test]
    fn non_integer_count_rejected() {
        let text = format!("{FEATURE_CSV_HEADER}\ng,,3.5,2,0.6,2,1,1.3,-1,0,0,0,0,0,1,2,2\n");
        let err = read_feature_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::Row { line: 2, .. }), "{err}");
    }
}
