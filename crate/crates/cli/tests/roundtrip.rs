use proptest::prelude::*;
use ramanujan::command::{parallel_thm1, parallel_trace, parse_grid, parse_stride};
use ramanujan::format::{
    from_json, read_residuals_csv, read_trace_csv, to_json, write_residuals_csv, write_trace_csv,
    LocalityDoc, SlopeDoc, Theorem1Doc, TraceDoc,
};
use ramanujan::sweep::Sweep;
use ramanujan_core::arith::SieveTable;
use ramanujan_core::local::locality_report;
use ramanujan_core::rsum::{thm1_report, RealArgument, Stride};
use ramanujan_core::series::{fit_line, partial_sum_trace, Abscissa, Checkpoint, CoefficientRule};
use ramanujan_core::ComplexValue;

#[test]
fn parallel_trace_matches_sequential() {
    let table = SieveTable::new(20_000).unwrap();
    let x = RealArgument::new(1.3).unwrap();
    let grid = parse_grid("log:5:20000:10").unwrap();
    for rule in [
        CoefficientRule::SigmaK(1),
        CoefficientRule::ZeroHardy,
        CoefficientRule::Sigma0Log,
    ] {
        let sequential = partial_sum_trace(rule, &x, &grid, &table).unwrap();
        for threads in [1, 2, 4] {
            let sweep = Sweep::new(threads).unwrap();
            let parallel = parallel_trace(rule, &x, &grid, &table, &sweep).unwrap();
            assert_eq!(parallel, sequential);
        }
    }
    let stride = Stride::Every(7);
    let sequential = thm1_report(&x, 9, 5000, &stride, &table).unwrap();
    let parallel = parallel_thm1(&x, 9, 5000, &stride, &table, &Sweep::new(3).unwrap()).unwrap();
    assert_eq!(parallel, sequential);
}

#[test]
fn trace_csv_and_json_round_trip() {
    let table = SieveTable::new(50_000).unwrap();
    let x = RealArgument::new(0.5).unwrap();
    let grid = parse_grid("log:1:50000:15").unwrap();
    let trace = partial_sum_trace(CoefficientRule::ZeroRamanujan, &x, &grid, &table).unwrap();

    let mut csv = Vec::new();
    write_trace_csv(&mut csv, &trace.checkpoints).unwrap();
    assert_eq!(read_trace_csv(csv.as_slice()).unwrap(), trace.checkpoints);

    let json = to_json(&TraceDoc::new(&trace)).unwrap();
    let back: TraceDoc = from_json(json.as_bytes()).unwrap();
    assert_eq!(back.into_trace().unwrap(), trace);
}

#[test]
fn report_round_trips() {
    let table = SieveTable::new(100_000).unwrap();
    let x = RealArgument::new(10.7).unwrap();
    let report = thm1_report(&x, 68, 4000, &Stride::Geometric(40), &table).unwrap();
    let mut csv = Vec::new();
    write_residuals_csv(&mut csv, &report.residuals).unwrap();
    assert_eq!(
        read_residuals_csv(csv.as_slice()).unwrap(),
        report.residuals
    );
    let json = to_json(&Theorem1Doc::new(&report)).unwrap();
    assert_eq!(
        from_json::<Theorem1Doc>(json.as_bytes())
            .unwrap()
            .into_report(),
        report
    );

    let x = RealArgument::new(0.5).unwrap();
    let trace = partial_sum_trace(
        CoefficientRule::ZeroHardy,
        &x,
        &parse_grid("log:100:100000:9").unwrap(),
        &table,
    )
    .unwrap();
    let fit = fit_line(Abscissa::Q, &trace).unwrap();
    let json = to_json(&SlopeDoc::new("zero-hardy", 0.5, &fit, None)).unwrap();
    assert_eq!(
        from_json::<SlopeDoc>(json.as_bytes())
            .unwrap()
            .into_fit()
            .unwrap(),
        fit
    );

    let report = locality_report(6, &[6.0, 4.0, 5.25], 5e-2, &table).unwrap();
    let json = to_json(&LocalityDoc::new(&report)).unwrap();
    assert_eq!(
        from_json::<LocalityDoc>(json.as_bytes())
            .unwrap()
            .into_report()
            .unwrap(),
        report
    );
}

#[test]
fn grid_and_stride_parsing() {
    assert_eq!(parse_grid("1,2,5").unwrap(), vec![1, 2, 5]);
    assert_eq!(parse_grid("log:10:1000:3").unwrap(), vec![10, 100, 1000]);
    for bad in [
        "",
        "0,1",
        "3,3",
        "5,4",
        "log:10:1000",
        "log:a:10:3",
        "log:10:12:5",
        "x",
    ] {
        assert!(parse_grid(bad).is_err(), "{bad}");
    }
    assert_eq!(parse_stride("all").unwrap(), Stride::All);
    assert_eq!(parse_stride("every:5").unwrap(), Stride::Every(5));
    assert_eq!(parse_stride("geometric:9").unwrap(), Stride::Geometric(9));
    assert!(parse_stride("every:0").is_err());
    assert!(parse_stride("sometimes").is_err());
}

proptest! {
    #[test]
    fn arbitrary_checkpoints_survive_csv(
        values in proptest::collection::vec((any::<f64>(), any::<f64>()), 0..40)
    ) {
        let checkpoints: Vec<Checkpoint> = values
            .iter()
            .enumerate()
            .filter(|(_, (re, im))| re.is_finite() && im.is_finite())
            .map(|(i, &(re, im))| Checkpoint { q: i as u64 + 1, value: ComplexValue::new(re, im) })
            .collect();
        let mut csv = Vec::new();
        write_trace_csv(&mut csv, &checkpoints).unwrap();
        let back = read_trace_csv(csv.as_slice()).unwrap();
        prop_assert_eq!(back.len(), checkpoints.len());
        for (a, b) in back.iter().zip(&checkpoints) {
            prop_assert_eq!(a.q, b.q);
            prop_assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
            prop_assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        }
    }
}
