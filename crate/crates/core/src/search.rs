//! Counterexample hunting on rational grids.
//!
//! Pointwise laws are scanned exhaustively over the `d`-grid. Integral-level
//! laws enumerate instances (monotone grid capacities, grid functions,
//! shifts, restriction sets) in a fixed lexicographic order when the whole
//! family fits in the budget, and otherwise sample `budget` seeded instances.

use rand::Rng;
use rayon::prelude::*;

use crate::capacity::{
    case_rng, random_comonotone_pair_with, random_function_with, repaired_capacity, Capacity, FiniteSpace,
    SimpleFunction, Subset,
};
use crate::error::{Error, Result};
use crate::laws::{admissible_tuples, is_comonotone, Bindings, Checker, Instance, LawId};
use crate::report::{CheckReport, Witness};
use crate::scalar::{denominator_grid, Realization, Value};

pub const MAX_DENOMINATOR: u32 = 64;
pub const MAX_EXHAUSTIVE_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Exhaustive when the case count fits in the budget, sampled otherwise.
    #[default]
    Auto,
    /// Lexicographic enumeration, truncated at the budget.
    Exhaustive,
    /// `budget` seeded random cases.
    Sampled,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub law: LawId,
    pub bindings: Bindings,
    /// Number of points of the space (integral-level laws only).
    pub n: usize,
    pub denominator: u32,
    pub budget: u64,
    pub seed: u64,
    pub mode: SearchMode,
}

impl SearchSpec {
    pub fn new(law: LawId, bindings: Bindings) -> Self {
        SearchSpec {
            law,
            bindings,
            n: 2,
            denominator: 10,
            budget: 100_000,
            seed: 0,
            mode: SearchMode::Auto,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.denominator == 0 || self.denominator > MAX_DENOMINATOR {
            return Err(Error::InvalidSearch(format!(
                "denominator must be in 1..={MAX_DENOMINATOR}, got {}",
                self.denominator
            )));
        }
        if self.budget == 0 {
            return Err(Error::InvalidSearch("budget must be at least 1".into()));
        }
        if !self.law.is_pointwise() && !(1..=MAX_EXHAUSTIVE_POINTS).contains(&self.n) {
            return Err(Error::InvalidSearch(format!(
                "n must be in 1..={MAX_EXHAUSTIVE_POINTS}, got {}",
                self.n
            )));
        }
        if self.law.needs_op() {
            self.bindings.op()?;
        }
        Ok(())
    }
}

/// Runs the pointwise or integral-level search the law calls for.
pub fn search(spec: &SearchSpec) -> Result<CheckReport> {
    if spec.law.is_pointwise() {
        search_pointwise(spec)
    } else {
        search_integral_law(spec)
    }
}

/// Exhaustive scan of the `d`-grid, stopping at the first violation or when
/// the budget runs out.
pub fn search_pointwise(spec: &SearchSpec) -> Result<CheckReport> {
    spec.validate()?;
    if !spec.law.is_pointwise() {
        return Err(Error::InvalidSearch(format!("{} is not a pointwise law", spec.law)));
    }
    let pts = denominator_grid(spec.denominator, Realization::Exact);
    let mut tuples = admissible_tuples(spec.law, &pts)?;
    let total = tuples.len() as u64;
    let truncated = total > spec.budget;
    tuples.truncate(spec.budget.min(total) as usize);
    let (n, w) = Checker::default().scan_pointwise(spec.law, &spec.bindings, &pts, &tuples)?;
    let desc = format!(
        "exhaustive over the 1/{} grid, {n} of {total} admissible cases",
        spec.denominator
    );
    let mut report = CheckReport::from_witness(spec.law.as_str(), desc, n, w);
    report.complete = !truncated || !report.holds_on_sample();
    Ok(report)
}

/// Odometer over `{0..=hi}^len` in lexicographic order (index 0 most
/// significant).
fn odometer(len: usize, hi: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut cur = Some(vec![0u32; len]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut k = len;
        loop {
            if k == 0 {
                cur = None;
                break;
            }
            k -= 1;
            if next[k] < hi {
                next[k] += 1;
                for slot in &mut next[k + 1..] {
                    *slot = 0;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Monotone capacities on `n` points with values in the `d`-grid, in
/// lexicographic order of their tables (mask order, grid indices), up to
/// `limit` of them.
pub fn grid_capacities(n: usize, d: u32, limit: u64) -> Vec<Vec<u32>> {
    let size = 1usize << n;
    let full = size - 1;
    let mut out = Vec::new();
    let mut table = vec![0u32; size];
    table[full] = d;
    fn rec(mask: usize, full: usize, n: usize, d: u32, table: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, limit: u64) {
        if out.len() as u64 >= limit {
            return;
        }
        if mask == full {
            // μ(X) = 1 dominates everything
            out.push(table.clone());
            return;
        }
        let lo = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| table[mask & !(1 << i)])
            .max()
            .unwrap_or(0);
        for v in lo..=d {
            table[mask] = v;
            rec(mask + 1, full, n, d, table, out, limit);
            if out.len() as u64 >= limit {
                return;
            }
        }
    }
    rec(1, full, n, d, &mut table, &mut out, limit);
    out
}

/// Per-capacity part of an integral-level case, as grid indices.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Rest {
    Pair(Vec<u32>, Vec<u32>),
    Shift { a: u32, f: Vec<u32>, subset: Option<u32> },
}

fn comonotone_idx(f: &[u32], g: &[u32]) -> bool {
    (0..f.len()).all(|x| {
        (x + 1..f.len()).all(|y| {
            let df = f[x].cmp(&f[y]);
            let dg = g[x].cmp(&g[y]);
            !(df.is_lt() && dg.is_gt() || df.is_gt() && dg.is_lt())
        })
    })
}

/// Per-capacity cases in lexicographic order, up to `limit`.
fn rests(law: LawId, n: usize, d: u32, limit: u64) -> Vec<Rest> {
    let mut out = Vec::new();
    if law.needs_pair() {
        'outer: for f in odometer(n, d) {
            for g in odometer(n, d) {
                if comonotone_idx(&f, &g) {
                    out.push(Rest::Pair(f.clone(), g));
                    if out.len() as u64 >= limit {
                        break 'outer;
                    }
                }
            }
        }
    } else {
        let subsets: Vec<Option<u32>> = if law.needs_subset() {
            (0..(1u32 << n)).map(Some).collect()
        } else {
            vec![None]
        };
        'outer2: for a in 0..=d {
            for f in odometer(n, d - a) {
                for &subset in &subsets {
                    out.push(Rest::Shift {
                        a,
                        f: f.clone(),
                        subset,
                    });
                    if out.len() as u64 >= limit {
                        break 'outer2;
                    }
                }
            }
        }
    }
    out
}

/// Number of exhaustive cases per capacity, by formula.
pub fn rest_count(law: LawId, n: usize, d: u32) -> u128 {
    let m = d as u128 + 1;
    if law.needs_pair() {
        // closed forms for n <= 2; larger spaces are counted by enumeration
        match n {
            1 => m * m,
            2 => m.pow(3) + m * m * (m * m - 1) / 2,
            _ => rests(law, n, d, u64::MAX).len() as u128,
        }
    } else {
        let subsets: u128 = if law.needs_subset() { 1 << n } else { 1 };
        (0..=d as u128).map(|a| (d as u128 - a + 1).pow(n as u32)).sum::<u128>() * subsets
    }
}

fn build_instance(space: &FiniteSpace, pts: &[Value], cap: &[u32], rest: &Rest) -> Result<Instance> {
    let values = cap.iter().map(|&k| pts[k as usize].clone()).collect();
    let mu = Capacity::from_table(space.clone(), values)?;
    let func = |idx: &[u32]| SimpleFunction::new(space.clone(), idx.iter().map(|&k| pts[k as usize].clone()).collect());
    Ok(match rest {
        Rest::Pair(f, g) => Instance::new(mu, func(f)?).with_g(func(g)?),
        Rest::Shift { a, f, subset } => {
            let mut inst = Instance::new(mu, func(f)?).with_shift(pts[*a as usize].clone());
            if let Some(s) = subset {
                inst = inst.with_subset(Subset(*s));
            }
            inst
        }
    })
}

fn sample_instance(spec: &SearchSpec, space: &FiniteSpace, pts: &[Value], index: u64) -> Result<Instance> {
    let d = spec.denominator;
    let mut rng = case_rng(spec.seed, index);
    let pick = |r: &mut rand_chacha::ChaCha8Rng| pts[r.gen_range(0..=d) as usize].clone();
    let mu = repaired_capacity(space, &mut rng, pick);
    if spec.law.needs_pair() {
        let (f, g) = random_comonotone_pair_with(space, &mut rng, pick);
        return Ok(Instance::new(mu, f).with_g(g));
    }
    let a = rng.gen_range(0..=d);
    let f = random_function_with(space, &mut rng, |r| pts[r.gen_range(0..=d - a) as usize].clone());
    let mut inst = Instance::new(mu, f).with_shift(pts[a as usize].clone());
    if spec.law.needs_subset() {
        inst = inst.with_subset(Subset(rng.gen_range(0..space.subset_count() as u32)));
    }
    Ok(inst)
}

/// Searches for an instance violating an integral-level law. Comonotonicity
/// of pairs is guaranteed by construction.
pub fn search_integral_law(spec: &SearchSpec) -> Result<CheckReport> {
    spec.validate()?;
    if spec.law.is_pointwise() {
        return Err(Error::InvalidSearch(format!("{} is a pointwise law", spec.law)));
    }
    let b = &spec.bindings;
    if !b.supports(Realization::Exact) {
        return Err(Error::UnsupportedRealization("search runs in exact realization".into()));
    }
    let space = FiniteSpace::with_size(spec.n)?;
    let pts = denominator_grid(spec.denominator, Realization::Exact);
    let checker = Checker::default();

    let budget = spec.budget;
    let caps = match spec.mode {
        SearchMode::Sampled => Vec::new(),
        _ => grid_capacities(spec.n, spec.denominator, budget + 1),
    };
    let rest_list = match spec.mode {
        SearchMode::Sampled => Vec::new(),
        _ => rests(spec.law, spec.n, spec.denominator, budget + 1),
    };
    let total = caps.len() as u128 * rest_list.len() as u128;
    let exhaustive = match spec.mode {
        SearchMode::Auto => total <= budget as u128,
        SearchMode::Exhaustive => true,
        SearchMode::Sampled => false,
    };

    let run = |i: u64| -> Result<Option<(u64, Witness)>> {
        let inst = if exhaustive {
            let per = rest_list.len() as u64;
            build_instance(&space, &pts, &caps[(i / per) as usize], &rest_list[(i % per) as usize])?
        } else {
            sample_instance(spec, &space, &pts, i)?
        };
        let report = checker.check_instance(spec.law, b, &inst)?;
        Ok(report.witness.map(|w| (i, w)))
    };

    let cases = if exhaustive {
        (total.min(budget as u128)) as u64
    } else {
        budget
    };
    let hit = (0..cases)
        .into_par_iter()
        .map(run)
        .filter_map(Result::transpose)
        .find_first(|_| true);

    let desc = if exhaustive {
        format!(
            "exhaustive over monotone 1/{} grid capacities on {} points, {} of {} cases",
            spec.denominator, spec.n, cases, total
        )
    } else {
        format!(
            "{} sampled cases on the 1/{} grid, {} points, seed {}",
            cases, spec.denominator, spec.n, spec.seed
        )
    };
    let complete = exhaustive && cases as u128 == total;
    match hit {
        None => {
            let mut r = CheckReport::holds(spec.law.as_str(), desc, cases);
            r.complete = complete;
            Ok(r)
        }
        Some(Err(e)) => Err(e),
        Some(Ok((i, mut w))) => {
            w.detail = format!("{} (case {i})", w.detail);
            let mut r = CheckReport::fails(spec.law.as_str(), desc, i + 1, w);
            r.complete = true;
            Ok(r)
        }
    }
}

/// Re-runs a witness instance through the law checker.
pub fn replay(law: LawId, bindings: &Bindings, instance: &Instance) -> Result<CheckReport> {
    if law.needs_pair() {
        let g = instance
            .g
            .as_ref()
            .ok_or_else(|| Error::Domain("witness lacks g".into()))?;
        if !is_comonotone(&instance.f, g, instance.f.space().full())? {
            return Err(Error::Domain("witness pair is not comonotone".into()));
        }
    }
    Checker::default().check_instance(law, bindings, instance)
}
