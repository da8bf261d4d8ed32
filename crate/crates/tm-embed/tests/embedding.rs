use ca_core::{evolve, Diagram};
use rtm::{run, Direction, Snapshot};
use sparse_grid::geometry::{lifetime, line_x};
use sparse_grid::verify::verify_squares_with;
use sparse_grid::{GridState, Layout};
use tm_embed::*;

fn diagram(er: &EmbeddedRule, oracle: &[u8], columns: usize, extra: usize) -> Diagram {
    let seed = embedded_seed(er, oracle, columns).unwrap();
    let top = Layout { columns }.top_row() as usize;
    evolve(&er.rule, &seed, top + extra).unwrap()
}

fn cells(er: &EmbeddedRule, d: &Diagram) -> Vec<Vec<Cell>> {
    d.rows.iter().map(|r| er.decode_row(&r.cells).unwrap()).collect()
}

fn reference(tm: &rtm::ReversibleTM, oracle: &[u8], columns: usize, steps: usize) -> Vec<Snapshot> {
    let mut padded = oracle.to_vec();
    padded.resize(columns, 0);
    run(tm, &padded, &Snapshot::initial(tm, &[]), steps, Direction::Forward).unwrap().snapshots
}

fn killer_free(d: &Diagram) -> bool {
    d.rows.iter().all(|r| !r.cells.contains(&sparse_grid::KILLER))
}

#[test]
fn trace_follows_the_reference_run() {
    for (name, oracle, columns) in [("no11", "0000", 10), ("parity", "0110", 10), ("stayput", "1", 7)] {
        let tm = rtm::bundled(name).unwrap();
        let er = build_embedded_rule(&tm).unwrap();
        let oracle: Vec<u8> = oracle.bytes().map(|b| b - b'0').collect();
        let d = diagram(&er, &oracle, columns, 0);
        assert!(killer_free(&d), "{name}");
        let trace = extract_tm_trace(&er, &d).unwrap();
        assert!(trace.len() >= 7, "{name}: {} entries", trace.len());
        let snaps = reference(&tm, &oracle, columns, trace.len() - 1);
        assert_eq!(trace.first_mismatch(&snaps), None, "{name}");
        for e in &trace.entries {
            let bits: Vec<u8> = e.tape.iter().map(|p| p.oracle).collect();
            assert_eq!(bits.len(), columns - e.t, "{name} t={}", e.t);
            assert!(bits.iter().enumerate().all(|(c, &b)| b == oracle.get(c).copied().unwrap_or(0)));
        }
    }
}

#[test]
fn stay_put_head_keeps_its_cell() {
    let tm = rtm::stay_put();
    let er = build_embedded_rule(&tm).unwrap();
    let d = diagram(&er, &[1], 5, 0);
    let trace = extract_tm_trace(&er, &d).unwrap();
    assert_eq!(trace.len(), 5);
    for e in &trace.entries {
        assert_eq!((e.head, e.state, e.column), (0, tm.initial, e.t));
    }
}

#[test]
fn oracle_is_on_the_tape_at_time_zero() {
    let er = build_embedded_rule(&rtm::no11()).unwrap();
    let d = diagram(&er, &[1, 0], 3, 0);
    let trace = extract_tm_trace(&er, &d).unwrap();
    let bits: Vec<u8> = trace.entries[0].tape.iter().map(|p| p.oracle).collect();
    assert_eq!(bits, vec![1, 0, 0]);
    assert!(matches!(embedded_seed(&er, &[1, 0, 1], 2), Err(EmbedError::OracleTooLong { .. })));
}

#[test]
fn small_seed_passes_every_verifier() {
    let er = build_embedded_rule(&rtm::no11()).unwrap();
    let d = diagram(&er, &[], 2, 2);
    assert!(killer_free(&d));
    assert!(verify_squares_with(&er, &d).unwrap().is_clean());
    assert!(verify_zones(&er, &d).unwrap().is_clean());
    for row in &d.rows {
        assert!(verify_head_unique(&er, row).unwrap().is_clean());
    }
}

#[test]
fn larger_diagrams_keep_the_grid_and_zones() {
    let er = build_embedded_rule(&rtm::parity()).unwrap();
    let d = diagram(&er, &[1, 0, 1], 8, 0);
    assert!(verify_squares_with(&er, &d).unwrap().is_clean());
    let z = verify_zones(&er, &d).unwrap();
    assert!(z.is_clean(), "{:?}", z.violations.first());
    for row in &d.rows {
        assert!(verify_head_unique(&er, row).unwrap().is_clean());
    }
    let rows = cells(&er, &d);
    // heads sit on lines, feeds or leftward diagonals, and zones are all used
    let carrier = |c: &Cell| c.base.vertical() || c.se() || (c.base == GridState::Quiescent && c.ext.a.is_some());
    assert!(rows.iter().flatten().all(|c| c.ext.head.is_none() || carrier(c)));
    for z in [sparse_grid::Zone::RightOfHead, sparse_grid::Zone::Unreachable] {
        assert!(rows.iter().flatten().any(|c| c.ext.zone == z));
    }
    assert!(rows.iter().flatten().all(|c| c.transports() <= 2));
}

#[test]
fn rejection_ignites_at_the_wake_up_site() {
    let tm = rtm::no11();
    let er = build_embedded_rule(&tm).unwrap();
    let columns = 5;
    let d = diagram(&er, &[1, 1], columns, 20);
    let first = d.rows.iter().position(|r| r.cells.contains(&sparse_grid::KILLER)).unwrap();
    // the machine rejects at time 3 on cell 1, i.e. square 6 of column 4
    let site = Layout { columns }.corner_sites(4, 6).0;
    assert_eq!(first as i64, site.time);
    assert_eq!(d.rows[first].get(site.cell), sparse_grid::KILLER);
    let bound = first + lifetime(4) as usize;
    assert!(d.rows.iter().skip(first).all(|r| r.cells.contains(&sparse_grid::KILLER)));
    assert!(bound > d.rows.len() || d.rows[bound].cells.contains(&sparse_grid::KILLER));
}

#[test]
fn truncated_diagram_gives_a_short_trace() {
    let er = build_embedded_rule(&rtm::no11()).unwrap();
    let seed = embedded_seed(&er, &[0], 3).unwrap();
    let d = evolve(&er.rule, &seed, 0).unwrap();
    assert!(extract_tm_trace(&er, &d).unwrap().len() <= 1);
}

#[test]
fn duplicated_head_is_reported() {
    let er = build_embedded_rule(&rtm::stay_put()).unwrap();
    let d = diagram(&er, &[1], 4, 0);
    let t = d.rows.len() / 2;
    let mut row = er.decode_row(&d.rows[t].cells).unwrap();
    let k = row.iter().position(|c| c.ext.head.is_some()).unwrap();
    let j = row.iter().position(|c| c.base.vertical() && c.ext.head.is_none()).unwrap();
    row[j].ext.head = row[k].ext.head.map(|h| Head { leg: Leg::Rise, ..h });
    let mut cfg = d.rows[t].clone();
    cfg.cells = er.encode_row(&row).unwrap();
    let rep = verify_head_unique(&er, &cfg).unwrap();
    assert_eq!(rep.violations.len(), 1);
    assert_eq!(rep.violations[0].code, "head-count");
}

#[test]
fn row_painted_unreachable_is_vacuously_clean() {
    let er = build_embedded_rule(&rtm::stay_put()).unwrap();
    let d = diagram(&er, &[1], 3, 0);
    let mut row = er.decode_row(&d.rows[5].cells).unwrap();
    for c in row.iter_mut().filter(|c| c.ext.zone != sparse_grid::Zone::Plain) {
        c.ext.zone = sparse_grid::Zone::Unreachable;
        c.ext.head = None;
    }
    let mut cfg = d.rows[5].clone();
    cfg.cells = er.encode_row(&row).unwrap();
    assert!(verify_head_unique(&er, &cfg).unwrap().is_clean());
}

#[test]
fn deleted_boundary_signal_is_caught_where_it_was() {
    let er = build_embedded_rule(&rtm::parity()).unwrap();
    let d = diagram(&er, &[0, 1], 6, 0);
    let rows = cells(&er, &d);
    let (t, k) = rows
        .iter()
        .enumerate()
        .find_map(|(t, r)| {
            let k = r.iter().position(|c| c.se() && c.ext.stage() == 3 && !c.base.vertical())?;
            let inside = |c: &Cell| matches!(c.base, GridState::Interior(_));
            (inside(&r[k - 1]) && inside(&r[k + 1])).then_some((t, k))
        })
        .unwrap();
    let untouched = evolve(&er.rule, &d.rows[t], 3).unwrap();
    assert!(verify_zones(&er, &untouched).unwrap().is_clean());
    let mut row = rows[t].clone();
    row[k].ext.set_stage(0);
    let mut cfg = d.rows[t].clone();
    cfg.cells = er.encode_row(&row).unwrap();
    let tail = evolve(&er.rule, &cfg, 3).unwrap();
    let rep = verify_zones(&er, &tail).unwrap();
    let first = rep.violations.first().expect("a violation");
    assert_eq!(first.code, "boundary");
    assert_eq!((first.site.time, first.site.cell), (0, cfg.origin + k as i64));
}

#[test]
fn quiescent_diagram_is_vacuously_clean() {
    let er = build_embedded_rule(&rtm::no11()).unwrap();
    let cfg = ca_core::Configuration::new(vec![0; 12], ca_core::Boundary::Quiescent(0), 0);
    let d = evolve(&er.rule, &cfg, 5).unwrap();
    assert!(verify_zones(&er, &d).unwrap().is_clean());
    assert!(verify_head_unique(&er, &cfg).unwrap().is_clean());
    assert!(extract_tm_trace(&er, &d).unwrap().is_empty());
}

#[test]
fn unreachable_zone_starts_below_the_diagonal() {
    // the boundary reaches column i at square i - 1
    let er = build_embedded_rule(&rtm::stay_put()).unwrap();
    let columns = 6;
    let d = diagram(&er, &[1], columns, 0);
    let rows = cells(&er, &d);
    let layout = Layout { columns };
    for i in 1..columns {
        let x = line_x(i);
        let turned = (1..rows.len()).find(|&t| {
            let at = |t: usize| rows[t][(x - d.rows[t].origin) as usize].ext.zone;
            at(t) == sparse_grid::Zone::Unreachable && at(t - 1) != sparse_grid::Zone::Unreachable
        });
        assert_eq!(turned.map(|t| t as i64), Some(layout.corner_sites(i, i - 1).0.time), "column {i}");
    }
}

#[test]
fn packed_rule_agrees_with_the_cell_step() {
    let tm = rtm::no11();
    let er = build_embedded_rule(&tm).unwrap();
    let m = tm_embed::machine::Backward::new(&tm).unwrap();
    let plan = SeedPlan::new(&tm, &[0, 1], 6).unwrap();
    let (origin, mut row) = tm_embed::seed::seed_cells(&plan);
    let d = diagram(&er, &[0, 1], 6, 0);
    let q = Cell::QUIESCENT;
    for (t, packed) in d.rows.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            assert_eq!(er.decode(packed.get(origin + k as i64)), Some(*c), "t={t} x={}", origin + k as i64);
        }
        row = (0..row.len())
            .map(|k| tm_embed::step::next(&m, if k == 0 { &q } else { &row[k - 1] }, &row[k], row.get(k + 1).unwrap_or(&q)))
            .collect();
    }
}

#[test]
fn trace_exports_as_csv() {
    let tm = rtm::stay_put();
    let er = build_embedded_rule(&tm).unwrap();
    let d = diagram(&er, &[1], 3, 0);
    let csv = extract_tm_trace(&er, &d).unwrap().to_csv(&tm);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,i,state,tape");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,0,"));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(6))]

    #[test]
    fn random_oracles_are_read_back(oracle in proptest::collection::vec(0u8..2, 0..=4)) {
        let tm = rtm::parity();
        let er = build_embedded_rule(&tm).unwrap();
        let columns = 6;
        let d = diagram(&er, &oracle, columns, 0);
        proptest::prop_assert!(killer_free(&d));
        let trace = extract_tm_trace(&er, &d).unwrap();
        proptest::prop_assert!(!trace.is_empty());
        let snaps = reference(&tm, &oracle, columns, trace.len() - 1);
        proptest::prop_assert_eq!(trace.first_mismatch(&snaps), None);
        let bits: Vec<u8> = trace.entries[0].tape.iter().map(|p| p.oracle).collect();
        let mut padded = oracle.clone();
        padded.resize(columns, 0);
        proptest::prop_assert_eq!(bits, padded);
    }
}
