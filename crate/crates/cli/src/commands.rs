use std::time::Instant;

use hyperlev::fixtures::load_set;
use hyperlev::implied_vol::{bs_call, implied_vol_expansion};
use hyperlev::inversion::{
    default_fourier_spec, digital_barrier_price, fourier_call_price, BarrierOptions, QuadratureSpec,
};
use hyperlev::pricing::{truncation_len, OptionKind, Pricer, TruncationVector};
use hyperlev::roots::{expand_root, numeric_roots_real, root_ids, track_roots_contour, RootMode, Side};
use hyperlev::{HyperExpParams, C64};

use crate::output::{Cell, Table};
use crate::{CliError, Kind, ModeArg, ModelArgs, OptionArgs};

pub fn params_for(model: &ModelArgs) -> Result<HyperExpParams, CliError> {
    Ok(load_set(&model.set)?.params(model.sigma, model.r)?)
}

/// Parses a comma- or whitespace-separated list; an empty list is an error.
pub fn parse_list<T: std::str::FromStr>(text: Option<&str>, what: &str) -> Result<Vec<T>, CliError> {
    let text = text.unwrap_or("");
    let items: Vec<T> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| CliError::Config(format!("cannot parse {s:?} in {what}")))
        })
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(CliError::Config(format!("empty {what}")));
    }
    Ok(items)
}

fn kind(k: Kind) -> OptionKind {
    match k {
        Kind::Call => OptionKind::Call,
        Kind::Put => OptionKind::Put,
    }
}

pub fn truncation(params: &HyperExpParams, opt: &OptionArgs) -> Result<TruncationVector, CliError> {
    let len = truncation_len(params, opt.k / opt.s0);
    match &opt.trunc {
        None => Ok(TruncationVector::default_for(len)),
        Some(text) => Ok(TruncationVector::new(parse_list(Some(text), "truncation vector")?)?),
    }
}

fn pricer(params: &HyperExpParams, opt: &OptionArgs, r: f64) -> Result<Pricer, CliError> {
    let trunc = truncation(params, opt)?;
    Ok(Pricer::new(params, opt.s0, opt.k, r, kind(opt.kind), &trunc)?)
}

pub fn price(model: &ModelArgs, opt: &OptionArgs) -> Result<Table, CliError> {
    let ts: Vec<f64> = parse_list(opt.t.as_deref(), "T-list")?;
    let params = params_for(model)?;
    let pr = pricer(&params, opt, model.r)?;
    let mut table = Table::new(["T", "price", "max_tail", "warnings"]);
    for t in ts {
        let res = pr.price(t)?;
        let tail = res.tails.iter().copied().fold(0.0, f64::max);
        table.push(vec![t.into(), res.price.into(), tail.into(), res.warnings.len().into()]);
    }
    Ok(table)
}

pub fn greeks(model: &ModelArgs, opt: &OptionArgs) -> Result<Table, CliError> {
    let ts: Vec<f64> = parse_list(opt.t.as_deref(), "T-list")?;
    let params = params_for(model)?;
    let trunc = truncation(&params, opt)?;
    let mut pr = pricer(&params, opt, model.r)?;
    let gaussian = params.sigma > 0.0;
    if gaussian {
        pr = pr.with_greeks(&params, &trunc)?;
    }
    let mut table = Table::new(["T", "price", "theta", "delta", "gamma"]);
    for t in ts {
        let price = pr.price(t)?.price;
        let theta = match pr.theta(t) {
            Ok(v) => Cell::Num(v),
            // at a kink the one-sided values are both meaningful; report neither
            Err(hyperlev::Error::AtKinkPoint { .. }) => Cell::Empty,
            Err(e) => return Err(e.into()),
        };
        let (delta, gamma) = if gaussian {
            let (d, g) = pr.delta_gamma(t)?;
            (Cell::Num(d), Cell::Num(g))
        } else {
            (Cell::Empty, Cell::Empty)
        };
        table.push(vec![t.into(), price.into(), theta, delta, gamma]);
    }
    Ok(table)
}

pub fn fourier(
    model: &ModelArgs,
    opt: &OptionArgs,
    c: Option<f64>,
    upper: f64,
    steps: usize,
) -> Result<Table, CliError> {
    let ts: Vec<f64> = parse_list(opt.t.as_deref(), "T-list")?;
    let params = params_for(model)?;
    let mut spec = default_fourier_spec(&params);
    if let Some(c) = c {
        spec.c = c;
    }
    let spec = QuadratureSpec::new(spec.c, upper, steps)?;
    let mut table = Table::new(["T", "price"]);
    for t in ts {
        let call = fourier_call_price(&params, opt.s0, opt.k, model.r, t, &spec)?;
        let price = match opt.kind {
            Kind::Call => call,
            Kind::Put => call - opt.s0 + opt.k * (-model.r * t).exp(),
        };
        table.push(vec![t.into(), price.into()]);
    }
    Ok(table)
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("contour range {text:?} must look like a:b with 0 <= a < b"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a >= 0.0 && b > a) {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn roots(
    model: &ModelArgs,
    q: Option<&str>,
    contour: Option<f64>,
    u: Option<&str>,
    points: usize,
    order: usize,
) -> Result<Table, CliError> {
    let params = params_for(model)?;
    let ids = root_ids(&params);
    let expansions = ids
        .iter()
        .map(|&id| expand_root(&params, id, order))
        .collect::<Result<Vec<_>, _>>()?;
    match (q, contour) {
        (Some(q), None) => {
            let qs: Vec<f64> = parse_list(Some(q), "q-list")?;
            let mut table = Table::new(["q", "root", "numeric", "series", "abs_diff", "q_min"]);
            for q in qs {
                let real = numeric_roots_real(&params, q)?;
                let located = real.pos.iter().copied().chain(real.neg.iter().map(|z| -z));
                for ((id, exp), z) in ids.iter().zip(&expansions).zip(located) {
                    let s = exp.eval(C64::new(q, 0.0)).re;
                    table.push(vec![
                        q.into(),
                        id.label(&params).into(),
                        z.into(),
                        s.into(),
                        (s - z).abs().into(),
                        exp.q_min.into(),
                    ]);
                }
            }
            Ok(table)
        }
        (None, Some(c)) => {
            let (a, b) = parse_range(u.unwrap_or(""))?;
            if points < 2 {
                return Err(CliError::Config("need at least 2 contour points".into()));
            }
            let grid: Vec<f64> = (0..points)
                .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
                .collect();
            let mut full = Vec::with_capacity(points + 1);
            if a > 0.0 {
                full.push(0.0);
            }
            full.extend_from_slice(&grid);
            let tracked = track_roots_contour(&params, c, &full)?;
            let offset = full.len() - grid.len();
            let mut table = Table::new([
                "u",
                "root",
                "tracked_re",
                "tracked_im",
                "series_re",
                "series_im",
                "series_residual",
                "distance",
            ]);
            for (i, &uu) in grid.iter().enumerate() {
                let qv = C64::new(c, uu);
                for (id, exp) in ids.iter().zip(&expansions) {
                    let s = exp.eval(qv);
                    // tracked roots keep their real-axis order, not the asymptotic labels
                    let side = match id.side {
                        Side::Pos => &tracked.pos[i + offset],
                        Side::Neg => &tracked.neg[i + offset],
                    };
                    let z = side
                        .iter()
                        .copied()
                        .min_by(|x, y| (x - s).norm().total_cmp(&(y - s).norm()))
                        .unwrap_or(s);
                    let residual = (params.psi_unchecked(s) - qv).norm();
                    table.push(vec![
                        uu.into(),
                        id.label(&params).into(),
                        z.re.into(),
                        z.im.into(),
                        s.re.into(),
                        s.im.into(),
                        residual.into(),
                        (z - s).norm().into(),
                    ]);
                }
            }
            Ok(table)
        }
        _ => Err(CliError::Config("roots needs exactly one of --q or --contour".into())),
    }
}

pub fn implied_vol(set: &str, sigma: Option<f64>, orders: &str, t: Option<&str>) -> Result<Table, CliError> {
    let orders: Vec<usize> = parse_list(Some(orders), "order list")?;
    let ts: Vec<f64> = match t {
        Some(text) => parse_list(Some(text), "T-list")?,
        None => (1..=50).map(|i| i as f64 * 1e-3).collect(),
    };
    let params = load_set(set)?.params(sigma, 0.0)?;
    let top = *orders.iter().max().unwrap_or(&1);
    let full = implied_vol_expansion(&params, top)?;
    let trunc = TruncationVector::default_for(truncation_len(&params, 1.0));
    let model = Pricer::new(&params, 1.0, 1.0, 0.0, OptionKind::Call, &trunc)?;
    let mut columns = vec!["T".to_string(), "model_price".to_string()];
    columns.extend(orders.iter().map(|n| format!("sigma_order{n}")));
    columns.push("roundtrip_error".into());
    let mut table = Table::new(columns);
    let top_exp = full.partial(top);
    for t in ts {
        let c = model.price(t)?.price;
        let mut row: Vec<Cell> = vec![t.into(), c.into()];
        row.extend(orders.iter().map(|&n| Cell::Num(full.partial(n).eval(t))));
        row.push((bs_call(1.0, 1.0, 0.0, t, top_exp.eval(t)) - c).abs().into());
        table.push(row);
    }
    Ok(table)
}

pub struct DigitalRequest {
    pub t: f64,
    pub k: f64,
    pub c: f64,
    pub steps: usize,
    pub upper: f64,
    pub mode: ModeArg,
    pub switch_u: f64,
    pub order: usize,
    pub timings: bool,
}

pub fn digital_columns(timings: bool) -> Table {
    let mut cols = vec!["steps", "upper", "method", "price"];
    if timings {
        cols.extend(["root_seconds", "total_seconds"]);
    }
    Table::new(cols)
}

pub fn digital_rows(params: &HyperExpParams, r: f64, req: &DigitalRequest, table: &mut Table) -> Result<(), CliError> {
    let spec = QuadratureSpec::new(req.c, req.upper, req.steps)?;
    let opts = BarrierOptions {
        switch_u: req.switch_u,
        order: req.order,
    };
    let modes: &[(RootMode, &str)] = match req.mode {
        ModeArg::Numeric => &[(RootMode::Numeric, "numeric")],
        ModeArg::Hybrid => &[(RootMode::Hybrid, "hybrid")],
        ModeArg::Both => &[(RootMode::Numeric, "numeric"), (RootMode::Hybrid, "hybrid")],
    };
    for &(mode, name) in modes {
        let start = Instant::now();
        let res = digital_barrier_price(params, req.t, req.k, r, &spec, mode, &opts)?;
        let mut row: Vec<Cell> = vec![req.steps.into(), req.upper.into(), name.into(), res.price.into()];
        if req.timings {
            row.push(res.root_time.as_secs_f64().into());
            row.push(start.elapsed().as_secs_f64().into());
        }
        table.push(row);
    }
    Ok(())
}

pub fn digital(model: &ModelArgs, req: &DigitalRequest) -> Result<Table, CliError> {
    let params = params_for(model)?;
    let mut table = digital_columns(req.timings);
    digital_rows(&params, model.r, req, &mut table)?;
    Ok(table)
}
