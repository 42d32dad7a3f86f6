use gridchrome::constructions::{block_coloring, mod5_coloring};
use gridchrome::solver::{brute_force_oracle, decide, decide_from, enumerate, Engine, SolverConfig, Status};
use gridchrome::{validate, Coloring, Error, GridDims, Position};
use proptest::prelude::*;

fn dims(m: usize, n: usize) -> GridDims {
    GridDims::new(m, n).unwrap()
}

fn status(d: GridDims, r: usize, k: usize, config: &SolverConfig) -> Status {
    decide(d, r, k, config).unwrap().status
}

#[test]
fn both_engine_statuses_on_main_cases() {
    let both = SolverConfig::with_engine(Engine::Both);
    for (m, n) in [(3, 6), (6, 3), (5, 6), (3, 10), (7, 6), (6, 7), (3, 14)] {
        assert_eq!(status(dims(m, n), 3, 4, &both), Status::Unsat, "{m}x{n}");
        let o = decide(dims(m, n), 3, 5, &both).unwrap();
        assert!(o.is_sat());
        assert!(validate(o.witness.as_ref().unwrap(), 3, Some(5)).unwrap().is_empty());
    }
    for (m, n) in [(4, 4), (4, 6), (6, 6), (2, 5), (2, 7), (4, 10)] {
        assert_eq!(status(dims(m, n), 3, 4, &both), Status::Sat, "{m}x{n}");
    }
}

#[test]
fn odd_odd_grids_need_five() {
    let both = SolverConfig::with_engine(Engine::Both);
    for (m, n) in [(3, 3), (3, 5), (5, 5), (5, 7)] {
        assert_eq!(status(dims(m, n), 3, 4, &both), Status::Unsat, "{m}x{n}");
    }
}

#[test]
fn brute_force_first_witness_matches_unbroken_search() {
    // With symmetry breaking off and the natural color order both procedures
    // return the lexicographically smallest coloring.
    let plain = SolverConfig {
        symmetry_breaking: false,
        ..SolverConfig::default()
    };
    for (m, n, r, k) in [(2, 3, 2, 4), (3, 3, 3, 5), (2, 5, 3, 4), (3, 4, 1, 2), (1, 7, 2, 3)] {
        let (_, first) = brute_force_oracle(dims(m, n), r, k).unwrap();
        let found = decide(dims(m, n), r, k, &plain).unwrap().witness;
        assert_eq!(first, found, "{m}x{n} r={r} k={k}");
    }
}

#[test]
fn enumeration_without_symmetry_is_closed_under_renaming() {
    let plain = SolverConfig {
        symmetry_breaking: false,
        ..SolverConfig::default()
    };
    let all = enumerate(dims(3, 4), 2, 4, None, &plain).unwrap();
    let broken = enumerate(dims(3, 4), 2, 4, None, &SolverConfig::default()).unwrap();
    assert!(!all.colorings.is_empty());
    // Every coloring uses all four colors, so each class has 24 members.
    assert_eq!(all.colorings.len(), 24 * broken.colorings.len());
    let swap = all.colorings[0].permute_colors(&[1, 0, 2, 3]).unwrap();
    assert!(all.colorings.contains(&swap));
}

#[test]
fn pinned_prefix_from_a_construction_extends() {
    let block = block_coloring(dims(6, 8)).unwrap();
    let mut partial = Coloring::unassigned(dims(6, 8), 4).unwrap();
    for j in 1..=8 {
        partial
            .set(Position::new(1, j), block.get(Position::new(1, j)))
            .unwrap();
    }
    let o = decide_from(&partial, 3, &SolverConfig::default()).unwrap();
    let w = o.witness.unwrap();
    assert!(validate(&w, 3, Some(4)).unwrap().is_empty());
    assert!((1..=8).all(|j| w.get(Position::new(1, j)) == block.get(Position::new(1, j))));
}

#[test]
fn limits_surface_as_errors() {
    let tiny = SolverConfig {
        node_limit: Some(3),
        symmetry_breaking: false,
        ..SolverConfig::default()
    };
    assert!(matches!(
        decide(dims(6, 6), 3, 4, &tiny),
        Err(Error::ResourceLimit { .. })
    ));
    let quick = SolverConfig {
        time_limit: Some(std::time::Duration::from_nanos(1)),
        ..SolverConfig::with_engine(Engine::FrontierDp)
    };
    assert!(matches!(
        decide(dims(7, 7), 3, 5, &quick),
        Err(Error::ResourceLimit { .. })
    ));
}

#[test]
fn threads_give_the_sequential_witness() {
    for (m, n, r, k) in [(5, 5, 3, 5), (4, 6, 3, 4), (6, 6, 2, 4), (7, 7, 4, 5)] {
        let seq = decide(dims(m, n), r, k, &SolverConfig::default()).unwrap();
        let par = decide(
            dims(m, n),
            r,
            k,
            &SolverConfig {
                threads: 3,
                ..SolverConfig::default()
            },
        )
        .unwrap();
        assert_eq!(seq.witness, par.witness, "{m}x{n} r={r} k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree(m in 1usize..=5, n in 1usize..=6, r in 1usize..=4, k in 1usize..=5, sym: bool) {
        let config = SolverConfig { symmetry_breaking: sym, ..SolverConfig::with_engine(Engine::Both) };
        let o = decide(dims(m, n), r, k, &config).unwrap();
        if let Some(w) = &o.witness {
            prop_assert!(validate(w, r, Some(k)).unwrap().is_empty());
        }
        let t = decide(dims(n, m), r, k, &config).unwrap();
        prop_assert_eq!(o.status, t.status);
    }

    #[test]
    fn seeded_search_agrees(m in 2usize..=6, n in 2usize..=6, r in 1usize..=4, k in 2usize..=5, seed: u64) {
        let plain = status(dims(m, n), r, k, &SolverConfig::default());
        let seeded = SolverConfig { seed: Some(seed), ..SolverConfig::default() };
        let o = decide(dims(m, n), r, k, &seeded).unwrap();
        prop_assert_eq!(o.status, plain);
        if let Some(w) = &o.witness {
            prop_assert!(validate(w, r, Some(k)).unwrap().is_empty());
        }
    }

    #[test]
    fn pinning_part_of_a_valid_coloring_stays_sat(m in 2usize..=7, n in 2usize..=7, mask in any::<u64>()) {
        let full = mod5_coloring(dims(m, n)).unwrap();
        let mut partial = Coloring::unassigned(dims(m, n), 5).unwrap();
        for (idx, p) in dims(m, n).positions().enumerate() {
            if mask >> (idx % 64) & 1 == 1 {
                partial.set(p, full.get(p)).unwrap();
            }
        }
        let o = decide_from(&partial, 4, &SolverConfig::default()).unwrap();
        prop_assert!(o.is_sat());
        let w = o.witness.unwrap();
        for p in dims(m, n).positions() {
            if let Some(x) = partial.get(p) {
                prop_assert_eq!(w.get(p), Some(x));
            }
        }
    }
}
