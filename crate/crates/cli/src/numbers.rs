use std::fmt::Display;

use ising_peel::algebra::{constants_critical, parse_rational, QuadSurd, Rational};
use ising_peel::critical::{boundary_series, boundary_series_f64, drift_and_tails, values_at_uc};
use ising_peel::laws::{Family, Regime};
use ising_peel::sim::LawProvider;
use ising_peel::tutte::{build_evaluated_table, build_exact_table, Coef, CoeffTable};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::args::{CoeffsArgs, ConstantsArgs, Global, LawsArgs, OutFormat, RegimeArg, SeriesArgs};
use crate::output::{emit, rows_out, table_format, CliError, CliResult};

/// a_num/a_den + (b_num/b_den)·√7.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ExactSurd {
    pub a_num: i64,
    pub a_den: i64,
    pub b_num: i64,
    pub b_den: i64,
}

fn small(r: &Rational) -> CliResult<(i64, i64)> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(CliError::Failed(format!("rational {r} does not fit in 64 bits"))),
    }
}

fn exact(x: &QuadSurd) -> CliResult<ExactSurd> {
    let (a_num, a_den) = small(&x.a)?;
    let (b_num, b_den) = small(&x.b)?;
    Ok(ExactSurd { a_num, a_den, b_num, b_den })
}

#[derive(Serialize, Debug)]
struct ConstantEntry {
    name: &'static str,
    exact: Option<ExactSurd>,
    decimal: String,
    precision_bits: usize,
}

#[derive(Serialize, Debug)]
struct ConstantRow<'a> {
    name: &'a str,
    a_num: Option<i64>,
    a_den: Option<i64>,
    b_num: Option<i64>,
    b_den: Option<i64>,
    decimal: &'a str,
    precision_bits: usize,
}

fn constant_entries(bits: usize) -> CliResult<Vec<ConstantEntry>> {
    let cc = constants_critical();
    let v = values_at_uc()?;
    let alpha1 = boundary_series(2)?.alpha[1].clone();
    let d = drift_and_tails(&v, &alpha1)?;
    let u_c_squared = &cc.t_c_squared / &(&cc.t_over_u * &cc.t_over_u);
    let surd = |name: &'static str, x: &QuadSurd| -> CliResult<ConstantEntry> {
        Ok(ConstantEntry { name, exact: Some(exact(x)?), decimal: x.to_prec(bits).to_string(), precision_bits: bits })
    };
    let root = |name: &'static str, x: &QuadSurd| ConstantEntry { name, exact: None, decimal: x.to_prec(bits).sqrt().to_string(), precision_bits: bits };
    let q = |r: Rational| QuadSurd::from_rational(r);
    Ok(vec![
        surd("nu_c", &cc.nu_c)?,
        surd("t_c_squared", &cc.t_c_squared)?,
        root("t_c", &cc.t_c_squared),
        surd("u_c_squared", &u_c_squared)?,
        root("u_c", &u_c_squared),
        surd("t_c_over_u_c", &cc.t_over_u)?,
        surd("t_c_times_u_c", &cc.t_times_u)?,
        surd("mu", &d.mu)?,
        surd("mu_squared", &q(cc.mu_squared.clone()))?,
        surd("mean_x1_plus_y1", &d.mu_sum)?,
        surd("c_infinity", &d.c_infinity)?,
        surd("c_infinity_squared", &q(cc.c_infty_squared.clone()))?,
        surd("c_x_over_c_y", &d.cx_over_cy)?,
        surd("alpha1", &q(alpha1))?,
        surd("b_ratio", &q(v.b_ratio.clone()))?,
        surd("normalization", &d.normalization)?,
    ])
}

pub fn constants(g: &Global, a: &ConstantsArgs) -> CliResult {
    if a.precision < 16 {
        return Err(CliError::Usage("--precision must be at least 16 bits".into()));
    }
    let entries = constant_entries(a.precision)?;
    let text = match table_format(g, OutFormat::Json)? {
        OutFormat::Csv => {
            let rows: Vec<ConstantRow> = entries
                .iter()
                .map(|e| ConstantRow {
                    name: e.name,
                    a_num: e.exact.as_ref().map(|x| x.a_num),
                    a_den: e.exact.as_ref().map(|x| x.a_den),
                    b_num: e.exact.as_ref().map(|x| x.b_num),
                    b_den: e.exact.as_ref().map(|x| x.b_den),
                    decimal: &e.decimal,
                    precision_bits: e.precision_bits,
                })
                .collect();
            crate::output::csv_string(&rows)?
        }
        _ => crate::output::json_string(&json!({ "constants": entries }))?,
    };
    emit(g, &text)
}

#[derive(Serialize, Debug)]
struct CoeffRow {
    p: usize,
    q: usize,
    n: usize,
    value: String,
}

fn coeff_rows<T: Coef + Display>(t: &CoeffTable<T>, p: usize, q: usize, n: usize) -> CliResult<Vec<CoeffRow>> {
    (0..=n).map(|k| Ok(CoeffRow { p, q, n: k, value: t.coeff(p, q, k)?.to_string() })).collect()
}

pub fn coeffs(g: &Global, a: &CoeffsArgs) -> CliResult {
    let perim = a.p + a.q;
    let rows = match a.nu.trim() {
        "exact" => coeff_rows(&build_exact_table(a.n, perim)?, a.p, a.q, a.n)?,
        "nu_c" => coeff_rows(&build_evaluated_table(a.n, perim, constants_critical().nu_c)?, a.p, a.q, a.n)?,
        s if s.contains(['.', 'e', 'E']) => {
            let nu: f64 = s.parse().map_err(|_| CliError::Usage(format!("cannot parse ν = {s:?}")))?;
            coeff_rows(&build_evaluated_table(a.n, perim, nu)?, a.p, a.q, a.n)?
        }
        s => {
            let nu = parse_rational(s).ok_or_else(|| CliError::Usage(format!("cannot parse ν = {s:?}")))?;
            coeff_rows(&build_evaluated_table(a.n, perim, nu)?, a.p, a.q, a.n)?
        }
    };
    rows_out(g, OutFormat::Csv, &rows, json!({ "nu": a.nu }), "coefficients")
}

#[derive(Serialize, Debug)]
struct SeriesRow {
    p: usize,
    zeta: Option<String>,
    zeta_decimal: f64,
    xi: Option<String>,
    xi_decimal: f64,
    alpha: Option<String>,
    alpha_decimal: f64,
}

pub fn series(g: &Global, a: &SeriesArgs) -> CliResult {
    if a.order < 2 {
        return Err(CliError::Usage("--order must be at least 2".into()));
    }
    let rows: Vec<SeriesRow> = if a.float {
        let s = boundary_series_f64(a.order)?;
        (0..s.zeta.len().min(s.xi.len()).min(s.alpha.len()))
            .map(|p| SeriesRow {
                p,
                zeta: None,
                zeta_decimal: s.zeta[p],
                xi: None,
                xi_decimal: s.xi[p],
                alpha: None,
                alpha_decimal: s.alpha[p],
            })
            .collect()
    } else {
        let s = boundary_series(a.order)?;
        (0..s.zeta.len().min(s.xi.len()).min(s.alpha.len()))
            .map(|p| SeriesRow {
                p,
                zeta: Some(s.zeta[p].to_string()),
                zeta_decimal: s.zeta[p].to_f64(),
                xi: Some(s.xi[p].to_string()),
                xi_decimal: s.xi[p].to_f64(),
                alpha: Some(s.alpha[p].to_string()),
                alpha_decimal: QuadSurd::from_rational(s.alpha[p].clone()).to_f64(),
            })
            .collect()
    };
    rows_out(g, OutFormat::Csv, &rows, json!({ "order": a.order }), "series")
}

#[derive(Serialize, Debug)]
struct LawRow {
    event: &'static str,
    k: u64,
    weight: f64,
}

/// The regime named on the command line.
pub fn regime(r: RegimeArg, p: Option<u64>, q: Option<u64>) -> CliResult<Regime> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("this regime needs --{flag}")));
    Ok(match r {
        RegimeArg::Full => Regime::Fullplane,
        RegimeArg::Half => Regime::Halfplane { p: need(p, "p")? },
        RegimeArg::Finite => Regime::Finite { p: need(p, "p")?, q: need(q, "q")? },
    })
}

/// Laws with a finite-boundary grid large enough for perimeters up to `top`.
pub fn provider_for(r: &Regime, top: usize) -> CliResult<LawProvider> {
    let laws = LawProvider::shared()?;
    Ok(match *r {
        Regime::Finite { p, q } => {
            let side = (p.min(q) as usize + 2).max(20);
            laws.with_finite_grid(top.max((p + q) as usize + 2), side)?
        }
        _ => laws,
    })
}

pub fn laws(g: &Global, a: &LawsArgs) -> CliResult {
    let r = regime(a.regime, a.p, a.q)?;
    let provider = provider_for(&r, 0)?;
    let law = provider.law(&r)?;
    let mut rows = Vec::new();
    for fam in Family::ALL {
        let ks: Vec<u64> = match fam {
            Family::Cp | Family::Cm => vec![0],
            _ => (0..=a.kmax).collect(),
        };
        for k in ks {
            let e = fam.event(k);
            if !r.supports(&e) {
                continue;
            }
            let w = law.weight(&e);
            if w > 0.0 {
                rows.push(LawRow { event: fam.name(), k, weight: w });
            }
        }
    }
    if law.terminal > 0.0 {
        rows.push(LawRow { event: "terminal", k: 0, weight: law.terminal });
    }
    let wrap = json!({
        "regime": r,
        "total_mass": law.total_mass(),
        "normalization_defect": law.normalization_defect.to_f64(),
    });
    rows_out(g, OutFormat::Csv, &rows, wrap, "weights")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_nu_is_one_plus_two_root_seven() {
        let e = constant_entries(64).unwrap();
        let nu = e.iter().find(|e| e.name == "nu_c").unwrap();
        assert_eq!(nu.exact, Some(ExactSurd { a_num: 1, a_den: 1, b_num: 2, b_den: 1 }));
        assert!(nu.decimal.starts_with("6.2915"));
        let mu = e.iter().find(|e| e.name == "mu").unwrap();
        assert_eq!(mu.exact, Some(ExactSurd { a_num: 0, a_den: 1, b_num: 1, b_den: 28 }));
    }
}
