use phasecert::ensemble::Field;
use phasecert::explorer::{parse_csv, run_grid_with_workers, write_csv, CellResult, GridProperty, GridSpec};
use proptest::prelude::*;

fn spec(field: Field, property: GridProperty, m: std::ops::RangeInclusive<usize>, n: std::ops::RangeInclusive<usize>, trials: usize) -> GridSpec {
    GridSpec {
        field,
        property,
        m_range: m,
        n_range: n,
        trials,
        seed: 20_240_601,
    }
}

fn assert_same(a: &[CellResult], b: &[CellResult]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!(x.same_tally(y), "{x:?} vs {y:?}");
    }
}

#[test]
fn grid_is_independent_of_worker_count() {
    let specs = [
        spec(Field::Real, GridProperty::RealInjective, 2..=3, 3..=6, 40),
        spec(Field::Complex, GridProperty::ComplexInjectiveM3, 3..=3, 7..=8, 20),
        spec(Field::Complex, GridProperty::LocalInjSample, 2..=4, 3..=8, 20),
    ];
    for s in specs {
        let one = run_grid_with_workers(&s, Some(1)).unwrap();
        let eight = run_grid_with_workers(&s, Some(8)).unwrap();
        let again = run_grid_with_workers(&s, Some(8)).unwrap();
        assert_same(&one, &eight);
        assert_same(&eight, &again);
    }
}

#[test]
fn real_success_fraction_is_monotone_in_n() {
    for property in [GridProperty::RealInjective, GridProperty::RealAlmostInjective, GridProperty::FullSpark] {
        let results = run_grid_with_workers(&spec(Field::Real, property, 2..=4, 1..=10, 100), None).unwrap();
        for m in 2..=4 {
            let row: Vec<usize> = results.iter().filter(|c| c.m == m).map(|c| c.successes).collect();
            // below threshold exactly 0, at and above at least 99
            assert!(
                row.windows(2).all(|w| w[0] <= w[1] || (w[0] >= 99 && w[1] >= 99)),
                "{property} M={m}: {row:?}"
            );
            assert!(row.iter().all(|&s| s == 0 || s >= 99), "{property} M={m}: {row:?}");
        }
    }
}

fn arb_cell() -> impl Strategy<Value = CellResult> {
    (
        prop::sample::select(vec![Field::Real, Field::Complex]),
        prop::sample::select(GridProperty::ALL.to_vec()),
        1usize..20,
        1usize..40,
        1usize..500,
        any::<u64>(),
        any::<(u16, u16)>(),
    )
        .prop_map(|(field, property, m, n, trials, seed, (a, b))| {
            let successes = a as usize % (trials + 1);
            let inconclusive = b as usize % (trials - successes + 1);
            CellResult {
                field,
                property,
                m,
                n,
                trials,
                successes,
                failures: trials - successes - inconclusive,
                inconclusive,
                seed,
                elapsed_ms: 0,
                necessity_only: property.necessity_only(),
            }
        })
}

proptest! {
    #[test]
    fn csv_round_trips(cells in prop::collection::btree_map((1usize..20, 1usize..40), arb_cell(), 1..12)) {
        // keys make (M, N) unique, so the sorted order is total
        let cells: Vec<CellResult> = cells.into_iter().map(|((m, n), c)| CellResult { m, n, ..c }).collect();
        let mut shuffled = cells.clone();
        shuffled.reverse();
        let mut buf = Vec::new();
        write_csv(&shuffled, &mut buf).unwrap();
        let parsed = parse_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(&parsed, &cells);
        let mut again = Vec::new();
        write_csv(&cells, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }
}
