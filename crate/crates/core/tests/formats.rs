use extropy::io::number::format_number;
use extropy::io::{
    contour_grid, parse_density, parse_forecasts_str, write_density, write_forecasts,
    DensityFormat, ForecastFormat,
};
use extropy::{ForecastRecord, ProbabilityVector};
use proptest::prelude::*;

fn record_set() -> impl Strategy<Value = Vec<ForecastRecord>> {
    (2usize..8, 1usize..20).prop_flat_map(|(n, rows)| {
        prop::collection::vec(
            (
                "[a-zA-Z0-9_#][a-zA-Z0-9_ ,\"#-]{0,8}[a-zA-Z0-9_]",
                prop::collection::vec(0.0f64..1.0, n)
                    .prop_filter("mass", |w| w.iter().sum::<f64>() > 0.0),
                0..n,
            ),
            rows,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .map(|(id, w, o)| {
                    ForecastRecord::new(id, ProbabilityVector::normalized(&w).unwrap(), o).unwrap()
                })
                .collect()
        })
    })
}

fn paired(records: Vec<ForecastRecord>) -> Vec<ForecastRecord> {
    records
        .into_iter()
        .flat_map(|r| {
            let mut other = r.clone();
            other.forecast = ProbabilityVector::uniform(r.forecast.len()).unwrap();
            [r.with_forecaster("alpha"), other.with_forecaster("beta")]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn forecasts_round_trip(records in record_set()) {
        for fmt in [ForecastFormat::Csv, ForecastFormat::Json] {
            let text = write_forecasts(&records, fmt).unwrap();
            let back = parse_forecasts_str(&text, fmt).unwrap();
            prop_assert_eq!(&back.records, &records);
            prop_assert_eq!(write_forecasts(&back.records, fmt).unwrap(), text);
        }
    }

    #[test]
    fn multi_forecaster_round_trip(records in record_set()) {
        let records = paired(records);
        for fmt in [ForecastFormat::Csv, ForecastFormat::Json] {
            let text = write_forecasts(&records, fmt).unwrap();
            let back = parse_forecasts_str(&text, fmt).unwrap();
            prop_assert_eq!(&back.records, &records);
        }
    }

    #[test]
    fn number_format_keeps_ten_digits(x in -1e12f64..1e12) {
        let s = format_number(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-10 * x.abs().max(f64::MIN_POSITIVE));
        prop_assert_eq!(format_number(back), s);
    }
}

#[test]
fn density_text_and_json_agree() {
    let text = "# x f\n0 0\n0.25 0.5\n0.5 1\n0.75 1.5\n1 2\n";
    let g = parse_density(text, DensityFormat::Text).unwrap();
    let json = write_density(&g, DensityFormat::Json);
    assert_eq!(parse_density(&json, DensityFormat::Json).unwrap(), g);
}

#[test]
fn contour_rows_respect_bounds() {
    let grid = contour_grid(60).unwrap();
    assert_eq!(grid.rows.len(), 61 * 62 / 2);
    let (hmax, jmax) = (3f64.ln(), 2.0 * 1.5f64.ln());
    for r in &grid.rows {
        assert!((r.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(r.entropy >= r.extropy - 1e-12);
        assert!(r.entropy <= hmax + 1e-12 && r.extropy <= jmax + 1e-12);
    }
    let best = grid
        .rows
        .iter()
        .max_by(|a, b| a.extropy.total_cmp(&b.extropy))
        .unwrap();
    assert_eq!(best.p, [20.0 / 60.0; 3]);
}

#[test]
fn csv_errors_carry_line_numbers() {
    let text = "id,p_1,p_2,outcome\n# comment\nr1,0.5,0.5,0\nr2,0.5,0.4,1\n";
    let err = parse_forecasts_str(text, ForecastFormat::Csv).unwrap_err();
    assert!(err.to_string().starts_with("row 4:"), "{err}");
}
