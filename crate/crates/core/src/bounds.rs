//! Bounds on the tail `(..., b, a, 2)` of a type-2 level h-vector, the
//! entrywise maxima with fixed `a`, and power-sum recipes realizing them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invsys::{InverseModule, PowerSumBlock, TwoFormRecipe};
use crate::macaulay::{binomial_u64, HVector};

/// A bound on one entry together with the range the recipes attain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// Which entry is bounded: `"a"`, `"b"` or `"h_k"`.
    pub entry: String,
    pub upper: u64,
    pub lower: Option<u64>,
    /// Interval of values realized by the recipe family; `None` when empty.
    pub attainable: Option<(u64, u64)>,
    pub recipe: String,
}

fn c(n: u64, k: u64) -> u64 {
    binomial_u64(n, k)
}

fn check_r_a(r: u64, a: u64) -> Result<()> {
    if r < 2 {
        return Err(Error::invalid(format!("codimension r = {r} must be at least 2")));
    }
    if a < r || a > 2 * r {
        return Err(Error::invalid(format!("a = {a} must lie in [r, 2r] = [{r}, {}]", 2 * r)));
    }
    Ok(())
}

/// `max { C(r1-1+i, i) + C(r2-1+i, i) : 1 <= r1, r2 <= r, r1 + r2 = a }`
/// in closed form: the most unbalanced split wins.
pub fn split_binomial_max(r: u64, a: u64, i: u64) -> Result<u64> {
    check_r_a(r, a)?;
    if i == 0 {
        return Err(Error::invalid("i must be at least 1"));
    }
    Ok(if a == r {
        c(r - 2 + i, i) + 1
    } else {
        c(r - 1 + i, i) + c(a - r - 1 + i, i)
    })
}

/// The same maximum by scanning every split.
pub fn split_binomial_max_bruteforce(r: u64, a: u64, i: u64) -> Result<u64> {
    check_r_a(r, a)?;
    if i == 0 {
        return Err(Error::invalid("i must be at least 1"));
    }
    Ok((1..=r)
        .filter(|&r1| a > r1 && a - r1 <= r)
        .map(|r1| c(r1 - 1 + i, i) + c(a - r1 - 1 + i, i))
        .max()
        .expect("a in [r, 2r] admits a split"))
}

/// Range of the next-to-last entry `a`: at most `2r`, at least `r` when `r <= 7`.
pub fn a_range(r: u64) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::invalid("r must be at least 2"));
    }
    Ok(BoundReport {
        entry: "a".into(),
        upper: 2 * r,
        lower: (r <= 7).then_some(r),
        attainable: Some((r, 2 * r)),
        recipe: "a = d1 + d2 with 1 <= d1, d2 <= r; F and G sums of d2 and d1 general powers in all r variables".into(),
    })
}

/// Witness recipe for a given `a` in `[r, 2r]`, socle degree `e >= 2`.
pub fn a_recipe(r: u64, a: u64, e: u32) -> Result<TwoFormRecipe> {
    check_r_a(r, a)?;
    if e < 2 {
        return Err(Error::invalid("socle degree must be at least 2"));
    }
    let d1 = a / 2;
    let block = |count: u64| PowerSumBlock {
        vars: r as usize,
        offset: 0,
        count: count as usize,
    };
    Ok(TwoFormRecipe {
        num_vars: r as usize,
        e,
        f: vec![block(a - d1)],
        g: vec![block(d1)],
    })
}

/// Upper bound on the third-to-last entry `b` of `(1, r, ..., b, a, 2)`.
pub fn b_bound(r: u64, a: u64, e: u64) -> Result<BoundReport> {
    check_r_a(r, a)?;
    if e < 3 {
        return Err(Error::invalid("b needs socle degree e >= 3"));
    }
    if a == r {
        let upper = c(r, 2) + 1;
        // F' lives in r - 1 variables, so its degree-(e-2) piece is capped too.
        let hi = upper.min(c(r - 2 + e - 2, e - 2) + 1);
        Ok(BoundReport {
            entry: "b".into(),
            upper,
            lower: Some(r),
            attainable: Some((r, hi)),
            recipe: "F' = sum of b-1 general e-th powers in y1..y(r-1), G' = yr^e".into(),
        })
    } else {
        let upper = (c(r + 1, 2) + c(a - r + 1, 2)).min(c(r + e - 3, e - 2));
        Ok(BoundReport {
            entry: "b".into(),
            upper,
            lower: None,
            attainable: (a <= upper).then_some((a, upper)),
            recipe: "G' = general powers in y1..y(a-r), F' = general powers in all variables; F' grows from r to C(r+1,2) summands, then G' grows".into(),
        })
    }
}

/// Witness recipe realizing third-to-last entry `b`, with its h-vector.
pub fn b_recipe(r: u64, a: u64, e: u64, b: u64) -> Result<(TwoFormRecipe, HVector)> {
    let report = b_bound(r, a, e)?;
    let Some((lo, hi)) = report.attainable else {
        return Err(Error::invalid("no attainable b for these parameters"));
    };
    if b < lo || b > hi {
        return Err(Error::invalid(format!("b = {b} outside the attainable range [{lo}, {hi}]")));
    }
    let recipe = if a == r {
        TwoFormRecipe {
            num_vars: r as usize,
            e: e as u32,
            f: vec![PowerSumBlock { vars: (r - 1) as usize, offset: 0, count: (b - 1) as usize }],
            g: vec![PowerSumBlock { vars: 1, offset: (r - 1) as usize, count: 1 }],
        }
    } else {
        let gamma = r + (b - a).min(c(r + 1, 2) - r);
        let beta = (a - r) + (b - a) - (gamma - r);
        TwoFormRecipe {
            num_vars: r as usize,
            e: e as u32,
            f: vec![PowerSumBlock { vars: r as usize, offset: 0, count: gamma as usize }],
            g: vec![PowerSumBlock { vars: (a - r) as usize, offset: 0, count: beta as usize }],
        }
    };
    let h = recipe.expected_hvector()?;
    let e = e as usize;
    if h.get(e - 2) != b || h.get(e - 1) != a || h.get(1) != r {
        return Err(Error::Internal(format!("recipe for b = {b} gives ({h})")));
    }
    Ok((recipe, h))
}

/// Largest possible `h_{e-i}` for a level `(1, r, ..., a, 2)`, `2 <= i <= e-2`.
/// With `a = r` the bound is only proven for `r <= 5`.
pub fn entry_upper(r: u64, a: u64, e: u64, i: u64) -> Result<u64> {
    check_r_a(r, a)?;
    if e < 4 || i < 2 || i > e - 2 {
        return Err(Error::invalid(format!("index i = {i} must lie in [2, e-2] with e = {e}")));
    }
    if a == r {
        if r > 5 {
            return Err(Error::HypothesisNotMet(format!(
                "the bound with a = r is proven only for r <= 5, got r = {r}"
            )));
        }
        Ok((c(r - 2 + i, i) + 1).min(c(r - 2 + e - i, e - i) + 1))
    } else {
        Ok((c(r - 1 + i, i) + c(a - r - 1 + i, i)).min(c(r - 1 + e - i, e - i)))
    }
}

/// The entrywise-maximal level h-vector `(1, r, ..., a, 2)` of socle degree
/// `e >= 4`, with the two-block recipe that attains every entry at once.
pub fn max_hvector(r: u64, a: u64, e: u64) -> Result<(HVector, TwoFormRecipe)> {
    check_r_a(r, a)?;
    if e < 4 {
        return Err(Error::invalid("the maximum is defined for socle degree e >= 4"));
    }
    let mut h = vec![0u64; e as usize + 1];
    h[0] = 1;
    h[1] = r;
    for i in 2..=e - 2 {
        h[(e - i) as usize] = entry_upper(r, a, e, i)?;
    }
    h[e as usize - 1] = a;
    h[e as usize] = 2;
    let s = e / 2;
    let recipe = if a == r {
        TwoFormRecipe {
            num_vars: r as usize,
            e: e as u32,
            f: vec![PowerSumBlock { vars: (r - 1) as usize, offset: 0, count: c(r - 2 + s, s) as usize }],
            g: vec![PowerSumBlock { vars: 1, offset: (r - 1) as usize, count: 1 }],
        }
    } else {
        TwoFormRecipe {
            num_vars: r as usize,
            e: e as u32,
            f: vec![PowerSumBlock { vars: r as usize, offset: 0, count: c(r - 1 + s, s) as usize }],
            g: vec![PowerSumBlock { vars: (a - r) as usize, offset: 0, count: c(a - r - 1 + s, s) as usize }],
        }
    };
    Ok((HVector::new(h)?, recipe))
}

/// Builds and verifies a module with h-vector [`max_hvector`] and level socle.
pub fn realize_max(r: u64, a: u64, e: u64, seed: u64, retries: usize) -> Result<InverseModule> {
    let (h, recipe) = max_hvector(r, a, e)?;
    recipe.realize(&h, seed, retries)
}
