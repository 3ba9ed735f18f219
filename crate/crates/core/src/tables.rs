//! Cost tables over prevalence 1%..10% and omega 0..0.9 for the
//! two-pure-type stream.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cost_model::{
    cost_markov_special, optimal_group_size, savings_ratio, ModelParams, SavingsMode,
    D1D2_REGULAR_LOWEST_COST, DORFMAN_GROUP_SIZES,
};
use crate::error::{invalid, Error, Result};
use crate::report::format_sig;

pub const GRID_LEN: usize = 10;

pub fn prevalence_grid() -> [f64; GRID_LEN] {
    std::array::from_fn(|i| (i + 1) as f64 / 100.0)
}

pub fn omega_grid() -> [f64; GRID_LEN] {
    std::array::from_fn(|i| i as f64 / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Cost at Dorfman's group size for each prevalence.
    Cost,
    /// Ratio to the i.i.d. cost at Dorfman's group size, percent.
    Saving,
    /// Optimal group size.
    SizeOpt,
    /// Cost at the optimal group size.
    CostOpt,
    /// Ratio to the i.i.d. cost, each at its optimal size, percent.
    SavingOpt,
}

impl TableKind {
    pub const ALL: [TableKind; 5] = [
        TableKind::Cost,
        TableKind::Saving,
        TableKind::SizeOpt,
        TableKind::CostOpt,
        TableKind::SavingOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Cost => "cost",
            TableKind::Saving => "saving",
            TableKind::SizeOpt => "size_opt",
            TableKind::CostOpt => "cost_opt",
            TableKind::SavingOpt => "saving_opt",
        }
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                invalid(
                    "table",
                    format!(
                        "unknown table `{s}` (cost | saving | size_opt | cost_opt | saving_opt)"
                    ),
                )
            })
    }
}

fn for_grid<T>(f: impl Fn(usize, f64, f64) -> Result<T>) -> Result<Vec<[T; GRID_LEN]>> {
    let omegas = omega_grid();
    prevalence_grid()
        .iter()
        .enumerate()
        .map(|(row, &r1)| {
            let cells = omegas
                .iter()
                .map(|&w| f(row, r1, w))
                .collect::<Result<Vec<T>>>()?;
            Ok(cells.try_into().ok().expect("grid width"))
        })
        .collect()
}

pub fn cost_grid() -> Result<Vec<[f64; GRID_LEN]>> {
    for_grid(|row, r1, w| cost_markov_special(r1, w, DORFMAN_GROUP_SIZES[row]))
}

/// Ratios for omega = 0.1..0.9 (the omega = 0 column is 100 by definition).
pub fn saving_grid() -> Result<Vec<[f64; GRID_LEN]>> {
    for_grid(|row, r1, w| {
        savings_ratio(
            &ModelParams::two_type(r1, w)?,
            SavingsMode::FixedSize(DORFMAN_GROUP_SIZES[row]),
        )
    })
}

pub fn size_opt_grid(m_max: usize) -> Result<Vec<[usize; GRID_LEN]>> {
    for_grid(|_, r1, w| Ok(optimal_group_size(&ModelParams::two_type(r1, w)?, m_max)?.argmin()))
}

pub fn cost_opt_grid(m_max: usize) -> Result<Vec<[f64; GRID_LEN]>> {
    for_grid(|_, r1, w| Ok(optimal_group_size(&ModelParams::two_type(r1, w)?, m_max)?.min_cost()))
}

pub fn saving_opt_grid(m_max: usize) -> Result<Vec<[f64; GRID_LEN]>> {
    for_grid(|_, r1, w| {
        savings_ratio(
            &ModelParams::two_type(r1, w)?,
            SavingsMode::OptimalSize { m_max },
        )
    })
}

/// Renders a table as CSV with one row per prevalence.
pub fn render_csv(kind: TableKind, m_max: usize) -> Result<String> {
    let omegas = omega_grid();
    // saving tables omit the omega = 0 identity column
    let first = match kind {
        TableKind::Saving | TableKind::SavingOpt => 1,
        _ => 0,
    };
    let mut header = vec!["r1".to_string()];
    if kind == TableKind::Cost {
        header.push("M".into());
    }
    header.extend(omegas[first..].iter().map(|w| format!("omega_{w:.1}")));
    if matches!(kind, TableKind::Cost | TableKind::CostOpt) {
        header.push("d1d2_regular_lowest_cost".into());
    }

    let cells: Vec<Vec<String>> = match kind {
        TableKind::Cost => fmt_grid(cost_grid()?),
        TableKind::Saving => fmt_grid(saving_grid()?),
        TableKind::SizeOpt => size_opt_grid(m_max)?
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect())
            .collect(),
        TableKind::CostOpt => fmt_grid(cost_opt_grid(m_max)?),
        TableKind::SavingOpt => fmt_grid(saving_opt_grid(m_max)?),
    };

    let mut out = header.join(",");
    out.push('\n');
    for (row, (r1, values)) in prevalence_grid().iter().zip(cells).enumerate() {
        let mut fields = vec![format!("{r1:.2}")];
        if kind == TableKind::Cost {
            fields.push(DORFMAN_GROUP_SIZES[row].to_string());
        }
        fields.extend(values.into_iter().skip(first));
        if matches!(kind, TableKind::Cost | TableKind::CostOpt) {
            fields.push(format!("{}", D1D2_REGULAR_LOWEST_COST[row]));
        }
        writeln!(out, "{}", fields.join(",")).expect("write to String");
    }
    Ok(out)
}

fn fmt_grid(grid: Vec<[f64; GRID_LEN]>) -> Vec<Vec<String>> {
    grid.iter()
        .map(|r| r.iter().map(|v| format_sig(*v, 6)).collect())
        .collect()
}
