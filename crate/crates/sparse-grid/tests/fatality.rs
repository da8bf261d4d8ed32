use ca_core::{step, Boundary, Configuration};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use sparse_grid::geometry::lifetime;
use sparse_grid::{canonical_seed, dynamics, grid, Layout, KILLER, QUIESCENT};

const COLUMNS: usize = 4;

fn padded_history(pad: usize) -> Vec<Configuration> {
    let seed = canonical_seed(COLUMNS);
    let mut cells = vec![QUIESCENT; pad];
    cells.extend(&seed.cells);
    cells.extend(vec![QUIESCENT; pad]);
    let mut rows = vec![Configuration::new(cells, Boundary::Quiescent(QUIESCENT), seed.origin - pad as i64)];
    let top = Layout { columns: COLUMNS }.top_row() + 2;
    for _ in 0..top {
        rows.push(step(&grid().rule, rows.last().unwrap()).unwrap());
    }
    rows
}

fn killer_span(c: &Configuration) -> Option<(usize, usize)> {
    let lo = c.cells.iter().position(|&s| s == KILLER)?;
    let hi = c.cells.iter().rposition(|&s| s == KILLER)?;
    Some((lo, hi))
}

#[test]
fn single_cell_tampering_is_fatal_or_harmless() {
    let bound = lifetime(COLUMNS - 1) as usize;
    let rows = padded_history(2 * bound);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let top = Layout { columns: COLUMNS }.top_row() as usize;
    for _ in 0..50 {
        let t = rng.gen_range(0..top);
        let construction: Vec<usize> = (0..rows[t].cells.len()).filter(|&i| rows[t].cells[i] != QUIESCENT).collect();
        let x = construction[rng.gen_range(0..construction.len())];
        let mut s = rng.gen_range(2..grid().alphabet.len() as u32);
        if s == rows[t].cells[x] {
            s = QUIESCENT;
        }
        let mut cur = rows[t].clone();
        cur.cells[x] = s;
        let mut killed_at = None;
        for dt in 0..=bound {
            if cur.cells.contains(&KILLER) {
                killed_at = Some(dt);
                break;
            }
            if rows.get(t + dt).is_some_and(|r| r.cells == cur.cells) {
                break;
            }
            cur = step(&grid().rule, &cur).unwrap();
        }
        let Some(_) = killed_at else {
            let rejoined = (0..=bound).any(|dt| rows.get(t + dt).is_some_and(|r| r.cells == cur.cells));
            assert!(rejoined, "t={t} x={x}: neither killer nor rejoin");
            continue;
        };
        // killer interval widens by one cell per side per step
        for _ in 0..10 {
            let (lo, hi) = killer_span(&cur).unwrap();
            assert!(cur.cells[lo..=hi].iter().all(|&s| s == KILLER));
            let next = step(&grid().rule, &cur).unwrap();
            assert_eq!(killer_span(&next), Some((lo - 1, hi + 1)));
            cur = next;
        }
    }
}

proptest! {
    #[test]
    fn table_matches_local_function(l in 0u32..213, c in 0u32..213, r in 0u32..213) {
        let g = grid();
        let n = g.alphabet.len() as u32;
        let (l, c, r) = (l % n, c % n, r % n);
        let st = |i| g.alphabet.state(i).unwrap();
        let want = g.alphabet.id(&dynamics::next(&st(l), &st(c), &st(r))).unwrap_or(KILLER);
        prop_assert_eq!(g.rule.apply_local(&[l, c, r]).unwrap(), want);
    }

    #[test]
    fn killer_absorbs(a in 0u32..213, b in 0u32..213, pos in 0usize..3) {
        let g = grid();
        let n = g.alphabet.len() as u32;
        let mut nb = [a % n, b % n, 0];
        nb.rotate_right(pos);
        nb[pos] = KILLER;
        prop_assert_eq!(g.rule.apply_local(&nb).unwrap(), KILLER);
    }

    #[test]
    fn invalid_pairs_ignite(l in 0u32..213, c in 0u32..213, r in 0u32..213) {
        let g = grid();
        let n = g.alphabet.len() as u32;
        let (l, c, r) = (l % n, c % n, r % n);
        let st = |i| g.alphabet.state(i).unwrap();
        if !sparse_grid::pair_ok(&st(l), &st(c)) || !sparse_grid::pair_ok(&st(c), &st(r)) {
            prop_assert_eq!(g.rule.apply_local(&[l, c, r]).unwrap(), KILLER);
        }
    }
}
