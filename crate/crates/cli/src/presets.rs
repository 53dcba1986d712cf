use clap::ValueEnum;

use hyperlev::fixtures::load_set;
use hyperlev::inversion::{default_fourier_spec, fourier_call_price};
use hyperlev::pricing::{OptionKind, Pricer, TruncationVector};

use crate::commands::{digital_columns, digital_rows, DigitalRequest};
use crate::output::{Cell, Table};
use crate::{CliError, ModeArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Table1,
    Table2,
    Table3,
    Table4,
}

const MATURITIES: [f64; 5] = [0.01, 0.1, 0.2, 0.5, 0.9];
const RATE: f64 = 0.03;

const LOW_ROWS: [[usize; 8]; 5] = [
    [2, 2, 2, 2, 2, 4, 4, 8],
    [4, 4, 4, 4, 4, 6, 6, 10],
    [6, 6, 6, 6, 6, 8, 8, 12],
    [8, 8, 8, 8, 8, 10, 10, 14],
    [10, 10, 10, 10, 10, 12, 12, 16],
];

struct PriceGrid {
    set: &'static str,
    s0: f64,
    strike: f64,
    rows: Vec<[usize; 8]>,
}

fn grid(p: Preset) -> PriceGrid {
    let mut rows = LOW_ROWS.to_vec();
    let (set, s0, strike, extra): (_, _, _, &[[usize; 8]]) = match p {
        Preset::Table2 => (
            "set1",
            95.0,
            90.0,
            &[
                [15, 15, 15, 15, 15, 30, 30, 60],
                [15, 15, 20, 20, 20, 40, 40, 100],
                [15, 15, 25, 25, 35, 50, 50, 110],
            ],
        ),
        Preset::Table3 => (
            "set2",
            300.0,
            300.0,
            &[[15, 15, 15, 15, 15, 30, 30, 60], [15, 15, 20, 20, 20, 40, 40, 100]],
        ),
        _ => (
            "set2",
            10.0,
            11.0,
            &[[15, 15, 15, 15, 15, 20, 20, 30], [15, 15, 15, 15, 15, 30, 30, 60]],
        ),
    };
    rows.extend_from_slice(extra);
    PriceGrid { set, s0, strike, rows }
}

fn price_table(p: Preset) -> Result<Table, CliError> {
    let g = grid(p);
    let params = load_set(g.set)?.params(None, RATE)?;
    let mut columns = vec!["truncation".to_string()];
    columns.extend(MATURITIES.iter().map(|t| format!("T={t}")));
    let mut table = Table::new(columns);
    for row in &g.rows {
        let trunc = TruncationVector::new(row.to_vec())?;
        let pr = Pricer::new(&params, g.s0, g.strike, RATE, OptionKind::Call, &trunc)?;
        let label = row.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
        let mut cells: Vec<Cell> = vec![label.into()];
        for &t in &MATURITIES {
            cells.push(pr.price(t)?.price.into());
        }
        table.push(cells);
    }
    let spec = default_fourier_spec(&params);
    let mut cells: Vec<Cell> = vec!["fourier".into()];
    for &t in &MATURITIES {
        cells.push(fourier_call_price(&params, g.s0, g.strike, RATE, t, &spec)?.into());
    }
    table.push(cells);
    Ok(table)
}

fn digital_table(extended: bool, timings: bool) -> Result<Table, CliError> {
    let params = load_set("set1")?.params(None, RATE)?;
    let mut table = digital_columns(timings);
    let mut ladder = vec![(100_000, 1e3), (1_000_000, 1e4)];
    if extended {
        ladder.push((10_000_000, 1e5));
    }
    for (steps, upper) in ladder {
        let req = DigitalRequest {
            t: 0.25,
            k: 1.1,
            c: 0.5,
            steps,
            upper,
            mode: ModeArg::Both,
            switch_u: 80.0,
            order: 10,
            timings,
        };
        digital_rows(&params, RATE, &req, &mut table)?;
    }
    Ok(table)
}

pub fn reproduce(p: Preset, extended: bool, timings: bool) -> Result<Table, CliError> {
    match p {
        Preset::Table1 => digital_table(extended, timings),
        _ => price_table(p),
    }
}
