//! Decision procedures for type-2 level h-vectors `(1, r, ..., a, 2)`:
//! necessary conditions, decomposition screens, witness constructions and
//! certificates recording which stage settled the question.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{b_bound, entry_upper, max_hvector};
use crate::error::{Error, Result};
use crate::hvec::{
    is_gorenstein_hvector, is_si_sequence, si_sequences, sub,
    two_part_decompositions, GorensteinVerdict, SocleVector,
};
use crate::invsys::construct::sampled_power_sum;
use crate::invsys::{
    expected_generic_hvector, lifted_points_form, verify_level_witness, verify_level_witness_below,
    Form, InverseModule, PowerSumBlock, TwoFormRecipe,
};
use crate::macaulay::{binomial_u64, graded_dim, is_o_sequence, HVector};

/// Witness search is skipped when `dim R_{e/2}` exceeds this.
pub const WITNESS_SEARCH_CAP: u64 = 200;

pub mod stage {
    pub const SOCLE_DEGREE_ONE: &str = "socle-degree-one";
    pub const O_SEQUENCE: &str = "o-sequence";
    pub const BOUNDS: &str = "bounds";
    pub const RR2: &str = "rr2-characterization";
    pub const WITNESS_SEARCH: &str = "witness-search";
    pub const TWO_PART: &str = "two-part-screen";
    pub const THREE_PART: &str = "three-part-screen";
    pub const EXHAUSTED: &str = "exhausted";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Level,
    NotLevel,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Level => "level",
            Verdict::NotLevel => "not-level",
            Verdict::Unknown => "unknown",
        })
    }
}

/// One stage of a decision run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub stage: String,
    pub outcome: String,
    pub detail: Value,
}

/// A module together with the h-vector and socle computed from it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub module: InverseModule,
    pub hvector: HVector,
    pub socle: SocleVector,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.module.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "hvector": self.hvector.entries(),
            "socle": self.socle.entries(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    /// The stage that produced the verdict.
    pub stage: String,
    pub reason: String,
    pub trace: Vec<TraceStep>,
    /// Present exactly when the verdict is Level.
    pub witness: Option<Witness>,
}

impl Certificate {
    fn new(verdict: Verdict, stage: &str, reason: impl Into<String>, detail: Value) -> Self {
        let reason = reason.into();
        Certificate {
            verdict,
            stage: stage.into(),
            trace: vec![TraceStep {
                stage: stage.into(),
                outcome: verdict.to_string(),
                detail: with_reason(detail, &reason),
            }],
            reason,
            witness: None,
        }
    }

    fn not_level(stage: &str, reason: impl Into<String>, detail: Value) -> Self {
        Self::new(Verdict::NotLevel, stage, reason, detail)
    }

    fn unknown(stage: &str, reason: impl Into<String>, detail: Value) -> Self {
        Self::new(Verdict::Unknown, stage, reason, detail)
    }

    fn level(stage: &str, reason: impl Into<String>, detail: Value, witness: Witness) -> Self {
        let mut c = Self::new(Verdict::Level, stage, reason, detail);
        c.witness = Some(witness);
        c
    }

    /// The detail record of the stage that produced the verdict.
    pub fn detail(&self) -> &Value {
        &self.trace.last().expect("certificates carry a trace").detail
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "stage": self.stage,
            "reason": self.reason,
            "trace": self.trace,
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

fn with_reason(detail: Value, reason: &str) -> Value {
    match detail {
        Value::Object(mut map) => {
            map.insert("reason".into(), reason.into());
            Value::Object(map)
        }
        Value::Null => json!({ "reason": reason }),
        other => json!({ "reason": reason, "data": other }),
    }
}

fn require_type_two(h: &HVector) -> Result<()> {
    if h.last() != 2 {
        return Err(Error::invalid(format!("expected h_e = 2, got h = ({h})")));
    }
    Ok(())
}

fn hv(entries: Vec<u64>) -> HVector {
    HVector::new(entries).expect("h_0 = 1 by construction")
}

/// `δ_u` and the lower bound `h_u - δ_u` on the `u`-th entry of some
/// Gorenstein quotient of socle degree `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IarrobinoBound {
    pub u: usize,
    pub delta_u: u64,
    pub guaranteed_entry: i64,
}

/// Least `δ >= 0` with `h_{e-u} >= 2 h_u - 2 - 3δ`.
pub fn iarrobino_bound(h: &HVector, u: usize) -> Result<IarrobinoBound> {
    require_type_two(h)?;
    let e = h.socle_degree();
    if u == 0 || u > e {
        return Err(Error::invalid(format!("u = {u} must lie in [1, {e}]")));
    }
    let excess = 2 * h.get(u) as i64 - 2 - h.get(e - u) as i64;
    let delta = if excess <= 0 { 0 } else { (excess + 2) / 3 } as u64;
    Ok(IarrobinoBound {
        u,
        delta_u: delta,
        guaranteed_entry: h.get(u) as i64 - delta as i64,
    })
}

/// True when `⌈(r-1)/3⌉ <= 2`, i.e. `r <= 7`: then every level
/// `(1, r, ..., a, 2)` has `a >= r`.
pub fn a_lower_bound_holds(r: u64) -> bool {
    r.saturating_sub(1).div_ceil(3) <= 2
}

/// `(0, 1, ..., 1)` of socle degree `e`.
fn ones_tail(e: usize) -> Vec<u64> {
    (0..=e).map(|i| u64::from(i > 0)).collect()
}

fn is_rr2_shape(h: &HVector) -> bool {
    let e = h.socle_degree();
    h.last() == 2 && e >= 2 && h.get(1) == h.get(e - 1) && h.get(1) >= 2
}

/// A form of degree `e` in `g.codim()` variables whose derivatives have
/// Hilbert function `g`: a sum of general powers when `g` has the generic
/// shape, the lifted-points form otherwise.
fn gorenstein_form(g: &HVector, rng: &mut ChaCha8Rng) -> Result<Form> {
    let e = g.socle_degree();
    let c = g.codim() as usize;
    if c == 1 {
        return Ok(Form::monomial(vec![e as u32], crate::invsys::form::rat(1)));
    }
    let m = g.get(e / 2);
    if expected_generic_hvector(c, m, e)? == *g {
        return Ok(sampled_power_sum(c, m as usize, e as u32, rng));
    }
    lifted_points_form(g)
}

/// `<F, G>` with `F` in the first `g1.codim()` variables and `G` in the
/// remaining `g2.codim()`, each with Gorenstein h-vector `g1`, `g2`. The
/// derivative spaces meet only in degree 0, so `g1 + g2` (with `h_0 = 1`) is a
/// proven upper bound for the verification.
pub fn split_gorenstein_witness(g1: &HVector, g2: &HVector, seed: u64, retries: usize) -> Result<Witness> {
    let e = g1.socle_degree();
    if g2.socle_degree() != e || !is_si_sequence(g1) || !is_si_sequence(g2) {
        return Err(Error::invalid("both parts must be SI-sequences of one socle degree"));
    }
    let (c1, c2) = (g1.codim() as usize, g2.codim() as usize);
    let r = c1 + c2;
    let expected = hv((0..=e).map(|i| if i == 0 { 1 } else { g1.get(i) + g2.get(i) }).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut observed = Vec::new();
    for _ in 0..=retries {
        let f = gorenstein_form(g1, &mut rng)?.embed(r, 0)?;
        let g = gorenstein_form(g2, &mut rng)?.embed(r, c1)?;
        let module = InverseModule::new(vec![f, g])?;
        match verify_level_witness_below(&module, &expected) {
            Ok(a) => {
                return Ok(Witness {
                    module,
                    hvector: a.hvector,
                    socle: a.socle,
                })
            }
            Err(_) => observed = module.hvector().into_entries(),
        }
    }
    Err(Error::Genericity {
        attempts: retries + 1,
        expected: expected.into_entries(),
        observed,
    })
}

/// `<y1 y3^{e-1}, y2 y3^{e-1}>`, with h-vector `(1, 3, ..., 3, 2)`.
fn monomial_rr2_witness(e: usize) -> Result<Witness> {
    let e32 = e as u32;
    let f = Form::monomial(vec![1, 0, e32 - 1], crate::invsys::form::rat(1));
    let g = Form::monomial(vec![0, 1, e32 - 1], crate::invsys::form::rat(1));
    let module = InverseModule::new(vec![f, g])?;
    let mut expected = vec![3u64; e + 1];
    expected[0] = 1;
    expected[e] = 2;
    let a = verify_level_witness(&module, &hv(expected))?;
    Ok(Witness {
        module,
        hvector: a.hvector,
        socle: a.socle,
    })
}

/// The witness for a level vector of shape `(1, r, ..., r, 2)` with
/// `h - (0, 1, ..., 1)` an SI-sequence: `<F, y_r^e>`, `F` in `y_1..y_{r-1}`.
pub fn rr2_witness(h: &HVector, seed: u64, retries: usize) -> Result<Witness> {
    if !is_rr2_shape(h) {
        return Err(Error::invalid(format!("({h}) is not of the shape (1, r, ..., r, 2)")));
    }
    let e = h.socle_degree();
    if h.get(1) == 3 && h.entries()[1..e].iter().all(|&v| v == 3) {
        return monomial_rr2_witness(e);
    }
    let g = HVector::from_signed(&sub(h.entries(), &ones_tail(e)))?;
    split_gorenstein_witness(&g, &hv(vec![1; e + 1]), seed, retries)
}

/// Decides a vector of shape `(1, r, ..., r, 2)` with `2 <= r <= 4`: it is
/// level exactly when `h - (0, 1, ..., 1)` is Gorenstein of codimension `r-1`.
pub fn characterize_rr2(h: &HVector, seed: u64, retries: usize) -> Result<Certificate> {
    if !is_rr2_shape(h) {
        return Err(Error::invalid(format!(
            "({h}) is not of the shape (1, r, ..., r, 2) with socle degree at least 2"
        )));
    }
    let r = h.get(1);
    let e = h.socle_degree();
    let g_signed = sub(h.entries(), &ones_tail(e));
    let detail = json!({ "h": h.entries(), "gorenstein_part": g_signed, "r": r });
    if r >= 5 {
        return Ok(Certificate::unknown(
            stage::RR2,
            "open for r >= 5: the Gorenstein part has codimension at least 4",
            detail,
        ));
    }
    let g = HVector::from_signed(&g_signed)?;
    match is_gorenstein_hvector(&g) {
        GorensteinVerdict::Yes => {
            let w = rr2_witness(h, seed, retries)?;
            Ok(Certificate::level(
                stage::RR2,
                format!("({g}) is an SI-sequence of codimension {}", r - 1),
                detail,
                w,
            ))
        }
        GorensteinVerdict::No => Ok(Certificate::not_level(
            stage::RR2,
            format!("({g}) is not a Gorenstein h-vector of codimension {}", r - 1),
            detail,
        )),
        GorensteinVerdict::Unknown => Err(Error::Internal("codimension at most 3 is always decided".into())),
    }
}

/// Not level when no Gorenstein `g <= h` leaves `reverse(h - g)` an O-sequence.
pub fn two_part_screen(h: &HVector) -> Result<Certificate> {
    require_type_two(h)?;
    if !h.is_o_sequence() {
        return Ok(Certificate::not_level(
            stage::O_SEQUENCE,
            format!("({h}) violates Macaulay's growth bound"),
            json!({ "h": h.entries() }),
        ));
    }
    let pairs = two_part_decompositions(h)?;
    let listed: Vec<Value> = pairs
        .iter()
        .map(|p| json!({ "g": p.g.entries(), "tail": p.tail, "g_verdict": p.g_verdict }))
        .collect();
    let detail = json!({ "h": h.entries(), "decompositions": listed });
    if pairs.is_empty() {
        Ok(Certificate::not_level(
            stage::TWO_PART,
            "no Gorenstein g with reverse(h - g) an O-sequence",
            detail,
        ))
    } else {
        Ok(Certificate::unknown(
            stage::TWO_PART,
            format!("{} admissible decomposition(s)", pairs.len()),
            detail,
        ))
    }
}

/// Codimension-3 screen on generator pairs. Every degree-`e` form of a level
/// module `M` has an h-vector `g` in the two-part set; generators with
/// h-vectors `gF`, `gG` force `h <= gF + gG` and a middle part
/// `gF + gG - h` that is an O-sequence. Not level when no pair qualifies.
pub fn three_part_screen(h: &HVector) -> Result<Certificate> {
    require_type_two(h)?;
    if h.codim() != 3 {
        return Err(Error::invalid(format!(
            "the three-part screen needs codimension 3, got {}",
            h.codim()
        )));
    }
    if !h.is_o_sequence() {
        return Ok(Certificate::not_level(
            stage::O_SEQUENCE,
            format!("({h}) violates Macaulay's growth bound"),
            json!({ "h": h.entries() }),
        ));
    }
    let candidates: Vec<HVector> = two_part_decompositions(h)?
        .into_iter()
        .filter(|p| p.g_verdict == GorensteinVerdict::Yes)
        .map(|p| p.g)
        .collect();
    let covers = |a: &HVector, b: &HVector| (0..h.len()).all(|i| a.get(i) + b.get(i) >= h.get(i));
    let feasible: Vec<&HVector> = candidates
        .iter()
        .filter(|g| candidates.iter().any(|g2| covers(g, g2)))
        .collect();
    let mut pairs = Vec::new();
    let mut admissible = None;
    for (k, gf) in feasible.iter().enumerate() {
        for gg in &feasible[k..] {
            if !covers(gf, gg) {
                continue;
            }
            let middle: Vec<i64> = (0..h.len())
                .map(|i| (gf.get(i) + gg.get(i)) as i64 - h.get(i) as i64)
                .collect();
            let ok = is_o_sequence(&middle);
            pairs.push(json!({
                "g_f": gf.entries(),
                "g_g": gg.entries(),
                "first": sub(h.entries(), gg.entries()),
                "middle": middle,
                "last": sub(h.entries(), gf.entries()),
                "middle_is_o_sequence": ok,
            }));
            if ok && admissible.is_none() {
                admissible = Some(middle);
            }
        }
    }
    let detail = json!({
        "h": h.entries(),
        "candidates": candidates.iter().map(HVector::entries).collect::<Vec<_>>(),
        "feasible": feasible.iter().map(|g| g.entries()).collect::<Vec<_>>(),
        "pairs": pairs,
    });
    match admissible {
        Some(middle) => Ok(Certificate::unknown(
            stage::THREE_PART,
            format!("middle part ({}) is an O-sequence", join(&middle)),
            detail,
        )),
        None if feasible.is_empty() => Ok(Certificate::not_level(
            stage::THREE_PART,
            "no pair of single-form h-vectors covers h",
            detail,
        )),
        None => Ok(Certificate::not_level(
            stage::THREE_PART,
            "every admissible generator pair leaves a middle part that is not an O-sequence",
            detail,
        )),
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// Necessary conditions on `(1, r, ..., b, a, 2)`; returns the first failure.
fn bound_failure(h: &HVector) -> Result<Option<(String, Value)>> {
    let e = h.socle_degree();
    let r = h.get(1);
    let a = h.get(e - 1);
    if a > 2 * r {
        return Ok(Some((format!("a = {a} > 2r = {}", 2 * r), json!({ "a": a, "upper": 2 * r }))));
    }
    if a < r {
        if a_lower_bound_holds(r) {
            return Ok(Some((format!("a = {a} < r = {r} with r <= 7"), json!({ "a": a, "lower": r }))));
        }
        // Outside the proven range nothing below depends on a >= r.
        return Ok(None);
    }
    if e >= 3 {
        let b = h.get(e - 2);
        let report = b_bound(r, a, e as u64)?;
        if b > report.upper {
            return Ok(Some((
                format!("b = {b} exceeds its bound {}", report.upper),
                json!({ "b": b, "upper": report.upper }),
            )));
        }
    }
    let bounded = a > r || r <= 5;
    if e >= 4 && bounded {
        for i in 2..=e - 2 {
            let upper = entry_upper(r, a, e as u64, i as u64)?;
            let v = h.get(e - i);
            if v > upper {
                return Ok(Some((
                    format!("h_{} = {v} exceeds its bound {upper}", e - i),
                    json!({ "index": e - i, "value": v, "upper": upper }),
                )));
            }
        }
    }
    if a == r && r <= 5 && !is_symmetric_inner(h) {
        let i = (2..=e.saturating_sub(2)).find(|&i| h.get(i) != h.get(e - i)).unwrap_or(1);
        return Ok(Some((
            format!("a = r = {r} <= 5 forces h_i = h_(e-i), but h_{i} = {} and h_{} = {}", h.get(i), e - i, h.get(e - i)),
            json!({ "index": i, "left": h.get(i), "right": h.get(e - i) }),
        )));
    }
    Ok(None)
}

/// `h_i = h_{e-i}` for `1 <= i <= e-1`.
fn is_symmetric_inner(h: &HVector) -> bool {
    let e = h.socle_degree();
    (1..e).all(|i| h.get(i) == h.get(e - i))
}

fn block(vars: usize, offset: usize, count: u64) -> PowerSumBlock {
    PowerSumBlock { vars, offset, count: count as usize }
}

/// Power-sum recipes with closed-form h-vectors, for `(1, r, ..., a, 2)`.
fn closed_form_recipes(r: usize, a: usize, e: usize) -> Vec<(String, TwoFormRecipe)> {
    let s = e / 2;
    let cap = |vars: usize| binomial_u64((vars - 1 + s) as u64, s as u64);
    let recipe = |f, g| TwoFormRecipe { num_vars: r, e: e as u32, f: vec![f], g: vec![g] };
    let mut out = Vec::new();
    if a == r && r >= 2 {
        for k in 1..=cap(r - 1) {
            out.push((format!("F: {k} powers in y1..y{}, G = y{r}^e", r - 1), recipe(block(r - 1, 0, k), block(1, r - 1, 1))));
        }
    }
    if a > r && a <= 2 * r {
        for gamma in 1..=cap(r) {
            for beta in 1..=cap(a - r) {
                out.push((
                    format!("F: {gamma} powers in all variables, G: {beta} powers in y1..y{}", a - r),
                    recipe(block(r, 0, gamma), block(a - r, 0, beta)),
                ));
            }
        }
    }
    for gamma in 1..=cap(r) {
        for beta in 1..=gamma {
            out.push((
                format!("F: {gamma} powers, G: {beta} powers, both in all variables"),
                recipe(block(r, 0, gamma), block(r, 0, beta)),
            ));
        }
    }
    for r1 in r.div_ceil(2)..r {
        let r2 = r - r1;
        for k1 in 1..=cap(r1) {
            for k2 in 1..=cap(r2) {
                out.push((
                    format!("F: {k1} powers in y1..y{r1}, G: {k2} powers in y{}..y{r}", r1 + 1),
                    recipe(block(r1, 0, k1), block(r2, r1, k2)),
                ));
            }
        }
    }
    out
}

/// Tries the constructions whose h-vectors are known in closed form.
fn search_witness(h: &HVector, seed: u64, retries: usize) -> Result<Option<(String, Witness)>> {
    let e = h.socle_degree();
    let r = h.get(1) as usize;
    let a = h.get(e - 1) as usize;
    if e >= 4 && a >= r && a <= 2 * r && (a > r || r <= 5) {
        let (max, recipe) = max_hvector(r as u64, a as u64, e as u64)?;
        if &max == h {
            if let Ok(w) = realize(&recipe, h, seed, retries) {
                return Ok(Some(("entrywise maximum recipe".into(), w)));
            }
        }
    }
    for (label, recipe) in closed_form_recipes(r, a, e) {
        if recipe.expected_hvector().ok().as_ref() == Some(h) {
            if let Ok(w) = realize(&recipe, h, seed, retries) {
                return Ok(Some((label, w)));
            }
        }
    }
    for c2 in 1..=r / 2 {
        let c1 = r - c2;
        for g2 in si_sequences(c2 as u64, e) {
            let rest = sub(h.entries(), g2.entries());
            let mut g1 = rest.clone();
            g1[0] = 1;
            if g1.iter().any(|&v| v < 0) {
                continue;
            }
            let Ok(g1) = HVector::from_signed(&g1) else { continue };
            if g1.codim() as usize != c1 || !is_si_sequence(&g1) {
                continue;
            }
            if let Ok(w) = split_gorenstein_witness(&g1, &g2, seed, retries) {
                return Ok(Some((format!("Gorenstein ({g1}) in y1..y{c1} plus ({g2}) in the rest"), w)));
            }
        }
    }
    Ok(None)
}

fn realize(recipe: &TwoFormRecipe, h: &HVector, seed: u64, retries: usize) -> Result<Witness> {
    let module = recipe.realize(h, seed, retries)?;
    let a = verify_level_witness_below(&module, h)?;
    Ok(Witness { module, hvector: a.hvector, socle: a.socle })
}

/// Runs every stage in order and returns the first definitive certificate.
pub fn decide(h: &HVector, seed: u64, retries: usize) -> Result<Certificate> {
    require_type_two(h)?;
    let e = h.socle_degree();
    let mut trace = Vec::new();
    let finish = |mut c: Certificate, mut trace: Vec<TraceStep>| {
        trace.append(&mut c.trace);
        c.trace = trace;
        c
    };
    let step = |stage: &str, detail: Value| TraceStep {
        stage: stage.into(),
        outcome: "passed".into(),
        detail,
    };

    if e == 1 {
        let y = |i: usize| {
            let mut exp = vec![0u32; 2];
            exp[i] = 1;
            Form::monomial(exp, crate::invsys::form::rat(1))
        };
        let module = InverseModule::new(vec![y(0), y(1)])?;
        let a = verify_level_witness(&module, h)?;
        let w = Witness { module, hvector: a.hvector, socle: a.socle };
        return Ok(Certificate::level(stage::SOCLE_DEGREE_ONE, "two independent linear forms", Value::Null, w));
    }

    if !h.is_o_sequence() {
        return Ok(Certificate::not_level(
            stage::O_SEQUENCE,
            format!("({h}) violates Macaulay's growth bound"),
            json!({ "h": h.entries() }),
        ));
    }
    trace.push(step(stage::O_SEQUENCE, Value::Null));

    if let Some((reason, detail)) = bound_failure(h)? {
        return Ok(finish(Certificate::not_level(stage::BOUNDS, reason, detail), trace));
    }
    trace.push(step(stage::BOUNDS, Value::Null));

    if is_rr2_shape(h) {
        let c = characterize_rr2(h, seed, retries)?;
        if c.verdict != Verdict::Unknown {
            return Ok(finish(c, trace));
        }
        trace.extend(c.trace);
    }

    let r = h.get(1) as usize;
    if graded_dim(r, e / 2) <= WITNESS_SEARCH_CAP {
        if let Some((label, w)) = search_witness(h, seed, retries)? {
            let c = Certificate::level(stage::WITNESS_SEARCH, label, json!({ "h": h.entries() }), w);
            return Ok(finish(c, trace));
        }
        trace.push(TraceStep {
            stage: stage::WITNESS_SEARCH.into(),
            outcome: "no-witness".into(),
            detail: Value::Null,
        });
    } else {
        trace.push(TraceStep {
            stage: stage::WITNESS_SEARCH.into(),
            outcome: "skipped".into(),
            detail: json!({ "dim": graded_dim(r, e / 2), "cap": WITNESS_SEARCH_CAP }),
        });
    }

    let c = two_part_screen(h)?;
    if c.verdict == Verdict::NotLevel {
        return Ok(finish(c, trace));
    }
    trace.extend(c.trace);

    if h.codim() == 3 {
        let c = three_part_screen(h)?;
        if c.verdict == Verdict::NotLevel {
            return Ok(finish(c, trace));
        }
        trace.extend(c.trace);
    }

    Ok(finish(
        Certificate::unknown(stage::EXHAUSTED, "no stage settled the question", Value::Null),
        trace,
    ))
}

/// Level vectors `(1, r, ..., r, 2)` of socle degree `2..=e_max`, each
/// witnessed and verified, in lexicographic order.
pub fn enumerate_rrr2(r: u64, e_max: usize, seed: u64, retries: usize) -> Result<Vec<HVector>> {
    if !(2..=4).contains(&r) {
        return Err(Error::invalid(format!("r = {r} must lie in [2, 4]")));
    }
    let mut out = Vec::new();
    for e in 2..=e_max {
        for g in si_sequences(r - 1, e) {
            let h = HVector::from_signed(&crate::hvec::add(&g.to_signed(), &ones_tail(e).iter().map(|&v| v as i64).collect::<Vec<_>>()))?;
            let w = rr2_witness(&h, seed, retries)?;
            if w.hvector != h {
                return Err(Error::Internal(format!("witness for ({h}) has h-vector ({})", w.hvector)));
            }
            out.push(h);
        }
    }
    out.sort();
    Ok(out)
}

/// Every O-sequence `(1, r, h_2, ..., h_{e-2}, r, 2)` with body entries in
/// `1..=cap`, in lexicographic order.
pub fn rr2_shape_sequences(r: u64, e: usize, cap: u64) -> Vec<HVector> {
    let mut out = Vec::new();
    if e < 2 {
        return out;
    }
    let mut prefix = vec![1u64, r];
    fn rec(r: u64, e: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<HVector>) {
        let i = prefix.len();
        if i == e {
            let mut full = prefix.clone();
            full.push(2);
            if is_o_sequence(&full.iter().map(|&v| v as i64).collect::<Vec<_>>()) {
                out.push(HVector::new(full).expect("h_0 = 1"));
            }
            return;
        }
        let grow = crate::macaulay::macaulay_upper_u64(prefix[i - 1], (i - 1) as u64);
        if i == e - 1 {
            if r <= grow {
                prefix.push(r);
                rec(r, e, cap, prefix, out);
                prefix.pop();
            }
            return;
        }
        for v in 1..=cap.min(grow) {
            prefix.push(v);
            rec(r, e, cap, prefix, out);
            prefix.pop();
        }
    }
    if e == 2 {
        out.push(hv(vec![1, r, 2]));
        return out;
    }
    rec(r, e, cap, &mut prefix, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hvec::is_symmetric;
    use crate::invsys::DEFAULT_RETRIES;

    fn h(v: &[u64]) -> HVector {
        HVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn iarrobino_examples() {
        let b = iarrobino_bound(&h(&[1, 6, 6, 6, 2]), 1).unwrap();
        assert_eq!((b.delta_u, b.guaranteed_entry), (2, 4));
        let b = iarrobino_bound(&h(&[1, 2, 2, 2]), 1).unwrap();
        assert_eq!((b.delta_u, b.guaranteed_entry), (0, 2));
        let b = iarrobino_bound(&h(&[1, 3, 3, 3, 2]), 2).unwrap();
        assert_eq!((b.delta_u, b.guaranteed_entry), (1, 2));
        assert!(iarrobino_bound(&h(&[1, 3, 3, 1]), 1).is_err());
    }

    #[test]
    fn a_lower_bound_range() {
        assert!(a_lower_bound_holds(2));
        assert!(a_lower_bound_holds(7));
        assert!(!a_lower_bound_holds(8));
    }

    #[test]
    fn rr2_examples() {
        let c = characterize_rr2(&h(&[1, 3, 4, 4, 3, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::Level);
        assert_eq!(c.witness.unwrap().hvector, h(&[1, 3, 4, 4, 3, 2]));
        let c = characterize_rr2(&h(&[1, 3, 5, 4, 3, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::NotLevel);
        let c = characterize_rr2(&h(&[1, 3, 3, 3, 3, 2]), 0, DEFAULT_RETRIES).unwrap();
        let w = c.witness.unwrap();
        assert_eq!(w.module.to_string(), "y1*y3^4\ny2*y3^4\n");
        let c = characterize_rr2(&h(&[1, 5, 5, 5, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::Unknown);
        assert!(c.reason.contains("r >= 5"));
        assert!(characterize_rr2(&h(&[1, 3, 4, 2]), 0, DEFAULT_RETRIES).is_err());
    }

    #[test]
    fn screens_on_the_non_level_example() {
        let x = h(&[1, 3, 6, 10, 9, 7, 5, 2]);
        assert_eq!(two_part_screen(&x).unwrap().verdict, Verdict::Unknown);
        let c = three_part_screen(&x).unwrap();
        assert_eq!(c.verdict, Verdict::NotLevel);
        assert_eq!(c.detail()["feasible"], json!([[1, 3, 4, 5, 5, 4, 3, 1]]));
        assert_eq!(c.detail()["pairs"][0]["middle"], json!([1, 3, 2, 0, 1, 1, 1, 0]));
        let c = decide(&x, 0, DEFAULT_RETRIES).unwrap();
        assert_eq!((c.verdict, c.stage.as_str()), (Verdict::NotLevel, stage::THREE_PART));
    }

    #[test]
    fn screens_do_not_fire_on_level_vectors() {
        for v in [&[1, 3, 3, 3, 2][..], &[1, 3, 4, 4, 3, 2]] {
            assert_eq!(two_part_screen(&h(v)).unwrap().verdict, Verdict::Unknown);
            assert_eq!(three_part_screen(&h(v)).unwrap().verdict, Verdict::Unknown);
        }
        assert_eq!(two_part_screen(&h(&[1, 2, 4, 3, 2])).unwrap().stage, stage::O_SEQUENCE);
        assert!(three_part_screen(&h(&[1, 4, 4, 2])).is_err());
    }

    #[test]
    fn decide_examples() {
        let x = h(&[1, 5, 11, 21, 36, 21, 11, 5, 2]);
        let c = decide(&x, 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::Level);
        let w = c.witness.unwrap();
        assert_eq!(w.hvector, x);
        assert_eq!(w.socle.entries(), &[0, 0, 0, 0, 0, 0, 0, 0, 2]);
        let c = decide(&h(&[1, 3, 7, 5, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!((c.verdict, c.stage.as_str()), (Verdict::NotLevel, stage::O_SEQUENCE));
        let c = decide(&h(&[1, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(c.verdict, Verdict::Level);
        assert!(decide(&h(&[1, 3, 1]), 0, DEFAULT_RETRIES).is_err());
    }

    #[test]
    fn decide_uses_bounds() {
        // a = 7 > 2r.
        let c = decide(&h(&[1, 3, 6, 7, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!((c.verdict, c.stage.as_str()), (Verdict::NotLevel, stage::BOUNDS));
        // a = 2 < r = 3.
        let c = decide(&h(&[1, 3, 3, 2, 2]), 0, DEFAULT_RETRIES).unwrap();
        assert_eq!((c.verdict, c.stage.as_str()), (Verdict::NotLevel, stage::BOUNDS));
    }

    #[test]
    fn maxima_are_witnessed() {
        for (a, v) in [
            (3, [1, 3, 4, 5, 5, 4, 3, 2]),
            (4, [1, 3, 6, 10, 11, 7, 4, 2]),
            (5, [1, 3, 6, 10, 14, 9, 5, 2]),
            (6, [1, 3, 6, 10, 15, 12, 6, 2]),
        ] {
            let c = decide(&h(&v), 0, DEFAULT_RETRIES).unwrap();
            assert_eq!(c.verdict, Verdict::Level, "a = {a}");
        }
    }

    #[test]
    fn enumeration_small_cases() {
        let two = enumerate_rrr2(2, 4, 0, DEFAULT_RETRIES).unwrap();
        assert_eq!(two, vec![h(&[1, 2, 2]), h(&[1, 2, 2, 2]), h(&[1, 2, 2, 2, 2])]);
        assert!(enumerate_rrr2(3, 3, 0, DEFAULT_RETRIES).unwrap().contains(&h(&[1, 3, 3, 2])));
        assert!(enumerate_rrr2(4, 4, 0, DEFAULT_RETRIES).unwrap().contains(&h(&[1, 4, 4, 4, 2])));
        assert!(enumerate_rrr2(5, 4, 0, DEFAULT_RETRIES).is_err());
    }

    #[test]
    fn shape_sequences_are_o_sequences_of_the_shape() {
        let all = rr2_shape_sequences(3, 5, 10);
        assert!(all.contains(&h(&[1, 3, 4, 4, 3, 2])));
        assert!(!all.iter().any(|x| x.get(2) > 6));
        for x in &all {
            assert!(is_rr2_shape(x) && x.is_o_sequence());
        }
    }

    #[test]
    fn generic_shape_uses_power_sums() {
        let w = rr2_witness(&h(&[1, 4, 6, 6, 4, 2]), 3, DEFAULT_RETRIES).unwrap();
        assert_eq!(w.hvector, h(&[1, 4, 6, 6, 4, 2]));
        assert!(!is_symmetric(&w.hvector));
    }

    proptest::proptest! {
        #[test]
        fn iarrobino_delta_is_least(body in proptest::collection::vec(1u64..30, 1..8)) {
            let mut v = vec![1];
            v.extend(body);
            v.push(2);
            let hv = h(&v);
            let e = hv.socle_degree();
            for u in 1..=e {
                let b = iarrobino_bound(&hv, u).unwrap();
                let need = |d: i64| hv.get(e - u) as i64 >= 2 * hv.get(u) as i64 - 2 - 3 * d;
                proptest::prop_assert!(need(b.delta_u as i64));
                if b.delta_u > 0 {
                    proptest::prop_assert!(!need(b.delta_u as i64 - 1));
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn level_verdicts_carry_verified_witnesses(
            r in 2u64..=3,
            body in proptest::collection::vec(1u64..10, 0..4),
            seed in 0u64..4,
        ) {
            let mut v = vec![1, r];
            v.extend(body);
            v.extend([r, 2]);
            let hv = h(&v);
            let c = decide(&hv, seed, DEFAULT_RETRIES).unwrap();
            if c.verdict == Verdict::Level {
                let w = c.witness.expect("Level without a witness");
                let a = verify_level_witness(&w.module, &hv).unwrap();
                proptest::prop_assert!(a.socle.is_level() && a.socle.type_() == 2);
            }
        }
    }
}
