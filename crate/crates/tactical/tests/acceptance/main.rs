//! One PASS/FAIL line per acceptance criterion.

mod six_points;
mod properties;
mod ten_points;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

pub type Check = fn() -> anyhow::Result<String>;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read<T: serde::de::DeserializeOwned>(name: &str) -> T {
    tactical::formats::read_json(&fixture(name)).expect("fixture parses")
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check, Option<Duration>); 11] = [
        (1, "six-point R/K matrices", six_points::criterion1, Some(Duration::from_secs(1))),
        (2, "six-point rho/kappa and lambda triangle", six_points::criterion2, None),
        (3, "3-(10,4,1) lambda triangle", ten_points::criterion3, None),
        (4, "rho(1) enumeration, 8 classes", ten_points::criterion4, Some(Duration::from_secs(60))),
        (5, "rho(2) extension counts", ten_points::criterion5, Some(Duration::from_secs(300))),
        (6, "indexing of the reference rho(2)", ten_points::criterion6, None),
        (7, "product right-hand side", ten_points::criterion7, None),
        (8, "identity property suite", properties::criterion8, None),
        (9, "Gram/Fisher suite", properties::criterion9, None),
        (10, "solver oracle", properties::criterion10, None),
        (11, "q-analog suite", properties::criterion11, Some(Duration::from_secs(30))),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, check, budget) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(Ok(detail)) => match budget {
                Some(b) if elapsed > b => Err(format!("{detail}; took {elapsed:.2?}, budget {b:?}")),
                _ => Ok(detail),
            },
            Ok(Err(e)) => Err(format!("{e:#}")),
            Err(panic) => Err(panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        match verdict {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
