//! Parameter sweeps over `tau`, figure data and self-check reports.

use std::f64::consts::SQRT_2;

use crate::boundary_law::{normalisability_verdict, residual_di1, BoundaryLaw};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::params::{tau_thresholds, Params};
use crate::periodic::{
    self, distinct_tuples, g_poly, zeta_k2, Branch, Family, PeriodicSolution, Q5Mirror, SymmetryFilter,
};
use crate::polyroot::PolyFamily;
use crate::symmetry::{classify, dedup, SymmetryKind};

/// A solution branch that can be swept over `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ScanFamily {
    Q1,
    Q2Mirror,
    Q3Mirror,
    Q3NonMirror,
    Q4Mirror,
    Q4NonMirror,
    Q4TypeUp,
    Q5Mirror,
    Q5NonMirror,
}

impl ScanFamily {
    pub fn q(self) -> usize {
        use ScanFamily::*;
        match self {
            Q1 => 1,
            Q2Mirror => 2,
            Q3Mirror | Q3NonMirror => 3,
            Q4Mirror | Q4NonMirror | Q4TypeUp => 4,
            Q5Mirror | Q5NonMirror => 5,
        }
    }

    pub fn name(self) -> &'static str {
        use ScanFamily::*;
        match self {
            Q1 => "q1",
            Q2Mirror => "q2_mirror",
            Q3Mirror => "q3_mirror",
            Q3NonMirror => "q3_nonmirror",
            Q4Mirror => "q4_mirror",
            Q4NonMirror => "q4_nonmirror",
            Q4TypeUp => "q4_up",
            Q5Mirror => "q5_mirror",
            Q5NonMirror => "q5_nonmirror",
        }
    }

    /// Families of period `q` admitted by `filter`.
    pub fn select(q: usize, filter: SymmetryFilter) -> Vec<ScanFamily> {
        use ScanFamily::*;
        use SymmetryFilter as F;
        let all = [
            Q1,
            Q2Mirror,
            Q3Mirror,
            Q3NonMirror,
            Q4Mirror,
            Q4NonMirror,
            Q4TypeUp,
            Q5Mirror,
            Q5NonMirror,
        ];
        all.into_iter()
            .filter(|f| f.q() == q)
            .filter(|f| {
                matches!(
                    (f, filter),
                    (_, F::All)
                        | (Q1, _)
                        | (Q4TypeUp, F::TypeUp)
                        | (Q2Mirror | Q3Mirror | Q4Mirror | Q5Mirror, F::Mirror)
                        | (Q3NonMirror | Q4NonMirror | Q5NonMirror, F::NonMirror)
                )
            })
            .collect()
    }

    /// Every solution the branch's reduction produces, at any period.
    pub fn solve(self, params: &Params) -> Result<Vec<PeriodicSolution>> {
        use ScanFamily::*;
        match self {
            Q1 => periodic::solve_q1(params),
            Q2Mirror => periodic::solve_q2_mirror(params),
            Q3Mirror => periodic::solve_q3_mirror(params),
            Q3NonMirror => periodic::solve_q3_nonmirror(params),
            Q4Mirror => periodic::solve_q4_mirror(params),
            Q4NonMirror => periodic::solve_q4_nonmirror(params),
            Q4TypeUp => periodic::solve_q4_type_up(params),
            Q5Mirror => periodic::solve_q5_mirror(params),
            Q5NonMirror => periodic::solve_q5_nonmirror(params),
        }
    }

    /// The branch's univariate reduction, if it has one.
    pub fn poly_family(self) -> Option<&'static dyn PolyFamily> {
        use ScanFamily::*;
        Some(match self {
            Q1 => return None,
            Q2Mirror => &periodic::Q2Mirror,
            Q3Mirror => &periodic::Q3Mirror,
            Q3NonMirror => &periodic::Q3NonMirrorUnit,
            Q4Mirror => &periodic::Q4Mirror,
            Q4NonMirror => &periodic::Q4NonMirrorUnit,
            Q4TypeUp => &periodic::Q4TypeUp,
            Q5Mirror => &periodic::Q5Mirror,
            Q5NonMirror => &periodic::Q5NonMirror,
        })
    }
}

/// Solutions of exact minimal period `q` from the given families:
/// distinct seed tuples, and one per class.
#[derive(Debug, Clone)]
pub struct Census {
    pub raw: Vec<PeriodicSolution>,
    pub classes: Vec<PeriodicSolution>,
}

pub fn census(params: &Params, q: usize, families: &[ScanFamily]) -> Result<Census> {
    let mut all = Vec::new();
    for f in families {
        all.extend(f.solve(params)?.into_iter().filter(|s| s.q() == q));
    }
    periodic::sort_solutions(&mut all);
    let raw = distinct_tuples(&all);
    let classes = dedup(&raw);
    Ok(Census { raw, classes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub tau: f64,
    pub q: usize,
    pub branch: String,
    pub raw_count: usize,
    pub dedup_count: usize,
    pub roots: Vec<f64>,
    pub transition: bool,
}

fn scan_point(params: &Params, family: ScanFamily) -> Result<ScanRow> {
    let c = census(params, family.q(), &[family])?;
    let roots = match family.poly_family() {
        Some(pf) => pf.roots(params)?.roots,
        None => vec![1.0],
    };
    Ok(ScanRow {
        tau: params.tau(),
        q: family.q(),
        branch: family.name().to_string(),
        raw_count: c.raw.len(),
        dedup_count: c.classes.len(),
        roots,
        transition: false,
    })
}

type Counts = (usize, usize);

fn counts_at(k: u32, tau: f64, family: ScanFamily) -> Result<Counts> {
    let r = scan_point(&Params::new(k, tau)?, family)?;
    Ok((r.raw_count, r.dedup_count))
}

/// Bisects `(lo, hi)` on a change of the solution counts.
pub fn bisect_transition(k: u32, family: ScanFamily, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let c_lo = counts_at(k, lo, family)?;
    if c_lo == counts_at(k, hi, family)? {
        return Err(Error::NoTransition {
            lo,
            hi,
            count: c_lo.0,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if counts_at(k, mid, family)? == c_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Width of the bisection bracket for scan transitions.
pub const TRANSITION_TOL: f64 = 1e-10;

/// Special values probed in every scan, since a count can change at a
/// single point (e.g. where two roots meet at `x = 1`).
pub fn probe_points(k: u32) -> Vec<f64> {
    let t = tau_thresholds(k);
    let mut v = vec![t.tau0, t.tau1];
    if k == 2 {
        v.push(2.0 + 2.0 * SQRT_2);
        v.push(2.0 * (1.0 + 5f64.sqrt()));
    }
    v
}

/// Evaluates the families on `steps` equally spaced values of `tau`, then
/// locates every count change between neighbouring grid points by
/// bisection and appends one flagged row per transition.
pub fn scan(
    k: u32,
    families: &[ScanFamily],
    tau_min: f64,
    tau_max: f64,
    steps: usize,
    exec: Execution,
) -> Result<Vec<ScanRow>> {
    if !(tau_min > 2.0 && tau_max >= tau_min) {
        return Err(Error::InvalidArgument(format!(
            "need 2 < tau_min <= tau_max, got [{tau_min}, {tau_max}]"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    Params::new(k, tau_min)?;
    let taus: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                tau_min
            } else {
                tau_min + (tau_max - tau_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut flagged = Vec::new();
    for &family in families {
        let grid: Vec<ScanRow> = exec::map(exec, &taus, |&t| scan_point(&Params::new(k, t)?, family))
            .into_iter()
            .collect::<Result<_>>()?;
        let brackets: Vec<(f64, f64)> = grid
            .windows(2)
            .filter(|w| (w[0].raw_count, w[0].dedup_count) != (w[1].raw_count, w[1].dedup_count))
            .map(|w| (w[0].tau, w[1].tau))
            .collect();
        let mut found: Vec<f64> = exec::map(exec, &brackets, |&(lo, hi)| {
            bisect_transition(k, family, lo, hi, TRANSITION_TOL)
        })
        .into_iter()
        .collect::<Result<_>>()?;
        for t in probe_points(k) {
            if t <= tau_min || t >= tau_max || found.iter().any(|f| (f - t).abs() < 1e-8) {
                continue;
            }
            let here = counts_at(k, t, family)?;
            let eps = 1e-6 * t;
            if here != counts_at(k, t - eps, family)? || here != counts_at(k, t + eps, family)? {
                found.push(t);
            }
        }
        found.sort_by(f64::total_cmp);
        for t in found {
            let mut row = scan_point(&Params::new(k, t)?, family)?;
            row.branch = format!("{}@transition", family.name());
            row.transition = true;
            flagged.push(row);
        }
        rows.extend(grid);
    }
    rows.extend(flagged);
    Ok(rows)
}

/// The transition values of a scan.
pub fn transitions(rows: &[ScanRow]) -> Vec<f64> {
    rows.iter().filter(|r| r.transition).map(|r| r.tau).collect()
}

/// Closed-form roots `x_1 .. x_4` of the k = 2 mirror 4-cycle equation,
/// where defined.
pub fn chor_roots(tau: f64) -> [Option<f64>; 4] {
    let d = tau * tau - 4.0 * tau;
    if d < 0.0 {
        return [None; 4];
    }
    let s = d.sqrt();
    let plus = d + 4.0 * s;
    let mut minus = d - 4.0 * s;
    // the inner pair coincides at tau = 2(1 + sqrt 5)
    if minus.abs() <= 64.0 * f64::EPSILON * (d + 4.0 * s) {
        minus = 0.0;
    }
    let pair = |v: f64| {
        if v < 0.0 {
            (None, None)
        } else {
            (Some(0.25 * (tau + v.sqrt())), Some(0.25 * (tau - v.sqrt())))
        }
    };
    let (x1, x2) = pair(plus);
    let (x3, x4) = pair(minus);
    [x1, x2, x3, x4]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `g(x_i(tau))` for the four closed-form 4-cycle roots, k = 2.
    Fig1,
    /// `phi(x) - x` on `(0.12, 3.87)`.
    Fig2,
    /// `g(x)` on `(0.12, 3.87)`.
    Fig3,
    /// The degree-6 polynomial of the 5-cycles `(1, y, y, 1, x)`, k = 2,
    /// on `(0.2, 0.4)`, `(0.7, 3.5)` and `(3.5, 6.8)`.
    Fig4,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            other => Err(Error::InvalidArgument(format!("unknown figure {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub columns: Vec<&'static str>,
    /// Missing cells are `None`.
    pub rows: Vec<Vec<Option<f64>>>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Data behind the figures. `fig1` sweeps `tau` over `[4, 10]`; the others
/// sample `x` at the given `tau`.
pub fn figure(fig: Figure, k: u32, tau: f64, grid: usize) -> Result<FigureData> {
    let params = Params::new(k, tau)?;
    let k2 = || -> Result<()> {
        if k != 2 {
            return Err(Error::InvalidArgument(format!(
                "{fig:?} is defined for k = 2 only"
            )));
        }
        Ok(())
    };
    let xy = |xs: Vec<f64>, f: &dyn Fn(f64) -> f64| FigureData {
        columns: vec!["x", "value"],
        rows: xs.into_iter().map(|x| vec![Some(x), Some(f(x))]).collect(),
    };
    Ok(match fig {
        Figure::Fig1 => {
            k2()?;
            let rows = linspace(4.0, 10.0, grid)
                .map(|t| {
                    let g = g_poly(&Params::new(2, t).expect("tau >= 4"));
                    let mut row = vec![Some(t)];
                    row.extend(chor_roots(t).iter().map(|x| x.map(|x| g.eval(x))));
                    row
                })
                .collect();
            FigureData {
                columns: vec!["tau", "g_x1", "g_x2", "g_x3", "g_x4"],
                rows,
            }
        }
        Figure::Fig2 => {
            let p = Q5Mirror.poly(&params);
            xy(linspace(0.12, 3.87, grid).collect(), &|x| p.eval(x))
        }
        Figure::Fig3 => {
            let g = g_poly(&params);
            xy(linspace(0.12, 3.87, grid).collect(), &|x| g.eval(x))
        }
        Figure::Fig4 => {
            k2()?;
            let z = zeta_k2(tau);
            let xs = [(0.2, 0.4), (0.7, 3.5), (3.5, 6.8)]
                .into_iter()
                .flat_map(|(a, b)| linspace(a, b, grid))
                .collect();
            xy(xs, &|x| z.eval(x))
        }
    })
}

/// Sign changes along a sampled column, skipping exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut n = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            n += 1;
        }
        last = v;
    }
    n
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub k: u32,
    pub tau: f64,
    /// Class counts of exact period `q` per family.
    pub counts: Vec<(String, usize)>,
    pub items: Vec<CheckItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.pass).collect()
    }
}

/// Class count of a family where the count is known in closed form.
pub fn expected_count(k: u32, tau: f64, family: ScanFamily) -> Option<usize> {
    let near = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let t = tau_thresholds(k);
    match family {
        ScanFamily::Q4Mirror if k == 2 => {
            let split = 2.0 * (1.0 + 5f64.sqrt());
            if near(tau, 4.0) || near(tau, split) {
                None
            } else if tau < 4.0 {
                Some(0)
            } else if tau < split {
                Some(2)
            } else {
                Some(4)
            }
        }
        ScanFamily::Q5Mirror | ScanFamily::Q5NonMirror if k == 2 && tau == 8.0 => Some(6),
        ScanFamily::Q3NonMirror if k == 2 => {
            let tc = 2.0 + 2.0 * SQRT_2;
            if near(tau, tc) || near(tau, t.tau0) {
                Some(1)
            } else if tau < tc {
                Some(0)
            } else {
                Some(2)
            }
        }
        ScanFamily::Q4NonMirror => {
            if near(tau, t.tau1) {
                None
            } else if tau < t.tau1 {
                Some(0)
            } else {
                Some(2)
            }
        }
        _ => None,
    }
}

const RESIDUAL_TOL: f64 = 1e-8;

/// Runs every reduction for `q <= 5` and checks residuals, the
/// normalisability verdict, the reflection symmetries and, where known,
/// the class counts.
pub fn verify(k: u32, tau: f64) -> Result<VerifyReport> {
    let params = Params::new(k, tau)?;
    let mut items = Vec::new();
    let mut counts = Vec::new();
    for q in 1..=5 {
        for family in ScanFamily::select(q, SymmetryFilter::All) {
            let sols = family.solve(&params)?;
            let name = family.name();
            let mut worst_sys = 0.0f64;
            let mut worst_di1 = 0.0f64;
            let mut sym_fail = Vec::new();
            let mut divergent = true;
            for s in &sols {
                // both residuals are absolute; measure them against the size
                // of the terms they are made of
                let scale = s.word().iter().fold(1.0f64, |m, u| m.max(u.powi(params.ki())));
                worst_sys = worst_sys.max(s.system_residual() / (tau * scale));
                let law = BoundaryLaw::from_word(s);
                worst_di1 = worst_di1.max(residual_di1(&law)? / scale);
                divergent &= normalisability_verdict(&law).is_divergent();
                if let Some(msg) = symmetry_violation(s) {
                    sym_fail.push(msg);
                }
            }
            items.push(CheckItem {
                name: format!("{name}/residual"),
                pass: worst_sys < RESIDUAL_TOL && worst_di1 < RESIDUAL_TOL,
                detail: format!("relative: system {worst_sys:.3e}, boundary law {worst_di1:.3e}"),
            });
            items.push(CheckItem {
                name: format!("{name}/normalisability"),
                pass: divergent,
                detail: "every law divergent".into(),
            });
            items.push(CheckItem {
                name: format!("{name}/symmetry"),
                pass: sym_fail.is_empty(),
                detail: if sym_fail.is_empty() {
                    "reflection structure as predicted".into()
                } else {
                    sym_fail.join("; ")
                },
            });
            let n = census(&params, q, &[family])?.classes.len();
            counts.push((name.to_string(), n));
            if let Some(want) = expected_count(k, tau, family) {
                items.push(CheckItem {
                    name: format!("{name}/count"),
                    pass: n == want,
                    detail: format!("{n} classes, expected {want}"),
                });
            }
        }
    }
    Ok(VerifyReport {
        k,
        tau,
        counts,
        items,
    })
}

/// A mirror seed must give a mirror word; a non-mirror word with an
/// internal anchor must be two-mirror symmetric.
pub fn symmetry_violation(s: &PeriodicSolution) -> Option<String> {
    let kind = classify(s.word()).kind;
    match s.branch() {
        Branch::Mirror if kind != SymmetryKind::Mirror => Some(format!(
            "{} word {:?} is not mirror symmetric",
            s.family().as_str(),
            s.word()
        )),
        Branch::NonMirror if has_internal_anchor(s.word()) && !matches!(kind, SymmetryKind::TwoMirror(_)) => {
            Some(format!(
                "{} word {:?} is not two-mirror symmetric",
                s.family().as_str(),
                s.word()
            ))
        }
        _ => None,
    }
}

/// `u_p = 1` and `u_{p+1} = u_-1` for some `0 < p < q`.
pub fn has_internal_anchor(word: &[f64]) -> bool {
    let q = word.len();
    let um1 = word[q - 1];
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    (1..q).any(|p| eq(word[p], 1.0) && eq(word[(p + 1) % q], um1))
}

/// Solutions for the `solve` command: classes of exact period `q`.
///
/// For `q > 5` the generic search is used and `experimental` must be set.
pub fn solve_classes(
    params: &Params,
    q: usize,
    filter: SymmetryFilter,
    experimental: bool,
    grid: usize,
) -> Result<Census> {
    if (1..=5).contains(&q) {
        return census(params, q, &ScanFamily::select(q, filter));
    }
    if !experimental || q > periodic::SEARCH_Q_MAX || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} needs 1 <= q <= 5, or q <= {} with the experimental search",
            periodic::SEARCH_Q_MAX
        )));
    }
    let found: Vec<PeriodicSolution> = periodic::search_periodic_numeric(params, q, grid)
        .into_iter()
        .filter(|s| s.q() == q)
        .filter(|s| match filter {
            SymmetryFilter::Mirror => s.branch() == Branch::Mirror,
            SymmetryFilter::NonMirror => s.branch() == Branch::NonMirror,
            _ => true,
        })
        .collect();
    let classes = dedup(&found);
    Ok(Census { raw: found, classes })
}

/// Whether a solution came from the generic search.
pub fn is_numeric(s: &PeriodicSolution) -> bool {
    s.family() == Family::Numeric
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chor_closed_forms() {
        let r = chor_roots(5.0);
        assert!((r[0].unwrap() - 2.183550745473931).abs() < 1e-12);
        assert!(r[2].is_none());
        assert!(chor_roots(8.0).iter().all(|x| x.is_some()));
    }

    #[test]
    fn families_by_filter() {
        assert_eq!(
            ScanFamily::select(4, SymmetryFilter::TypeUp),
            vec![ScanFamily::Q4TypeUp]
        );
        assert_eq!(ScanFamily::select(2, SymmetryFilter::NonMirror), vec![]);
        assert_eq!(
            ScanFamily::select(1, SymmetryFilter::Mirror),
            vec![ScanFamily::Q1]
        );
        assert_eq!(ScanFamily::select(5, SymmetryFilter::All).len(), 2);
    }
}
