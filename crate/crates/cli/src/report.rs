//! Structured reports printed by the CLI. Words and states are rendered by name.

use std::fmt::Write as _;

use mealy_orbits::finiteness::{Outcome, WorkUsed};
use mealy_orbits::{
    ConsistencyReport, DecideBudgets, EnumBudget, FinitenessVerdict, GrowthReport, MealyAutomaton,
    OrbitSignature, WitnessBudget, WitnessChain,
};
use serde::{Deserialize, Serialize};

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub states: usize,
    pub letters: usize,
    pub state_names: Vec<String>,
    pub alphabet: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActReport {
    pub element: String,
    pub input: String,
    pub image: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub section: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DotReport {
    pub dot: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub generators: Vec<String>,
    pub basepoint: String,
    pub closed: bool,
    pub size: Option<usize>,
    pub lower_bound: usize,
    pub cap: usize,
    pub points: Vec<String>,
    pub edges: Vec<Vec<usize>>,
}

pub fn orbit_text(r: &OrbitReport) -> String {
    match r.size {
        Some(n) => format!("orbit of {}: size {n}\npoints: {}\n", r.basepoint, r.points.join(" ")),
        None => format!("orbit of {}: cap exceeded, size > {}\n", r.basepoint, r.lower_bound),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpOrbitReport {
    pub generators: Vec<String>,
    pub basepoint: String,
    pub closed: bool,
    pub size: Option<usize>,
    pub lower_bound: usize,
    pub cap: usize,
    pub points: Vec<String>,
}

pub fn up_orbit_text(r: &UpOrbitReport) -> String {
    let head = match r.size {
        Some(n) => format!("orbit of {}: size {n}", r.basepoint),
        None => format!("orbit of {}: cap exceeded, at least {} points", r.basepoint, r.lower_bound),
    };
    format!("{head}\npoints: {}\n", r.points.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthView {
    pub generators: Vec<String>,
    pub b: Vec<usize>,
    pub closed: bool,
    pub total: Option<usize>,
    pub budgets: EnumBudget,
    pub witnesses: Vec<String>,
}

impl GrowthView {
    pub fn new(m: &MealyAutomaton, generators: Vec<String>, r: &GrowthReport) -> Self {
        GrowthView {
            generators,
            b: r.b.clone(),
            closed: r.closed,
            total: r.total,
            budgets: r.budgets,
            witnesses: r
                .witnesses
                .iter()
                .flatten()
                .map(|s| m.render_state_word(s))
                .collect(),
        }
    }
}

pub fn growth_text(r: &GrowthView) -> String {
    let mut s = String::from("length  elements\n");
    for (k, b) in r.b.iter().enumerate() {
        let _ = writeln!(s, "{:>6}  {b}", k + 1);
    }
    match r.total {
        Some(n) if r.closed => {
            let _ = writeln!(s, "closed: true, total {n}");
        }
        _ => {
            let _ = writeln!(
                s,
                "closed: false (budgets: {} elements, length {})",
                r.budgets.max_elements, r.budgets.max_length
            );
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainView {
    pub generators: Vec<String>,
    pub prefixes: Vec<String>,
    pub orbit_sizes: Vec<usize>,
    pub exceeded: bool,
    pub depth_reached: usize,
    pub work: u64,
    pub budget: WitnessBudget,
}

impl ChainView {
    pub fn new(m: &MealyAutomaton, generators: Vec<String>, c: &WitnessChain) -> Self {
        ChainView {
            generators,
            prefixes: c.prefixes.iter().map(|p| m.alphabet().render_word(p)).collect(),
            orbit_sizes: c.orbit_sizes.clone(),
            exceeded: c.exceeded,
            depth_reached: c.depth_reached,
            work: c.work,
            budget: c.budget,
        }
    }
}

pub fn chain_text(r: &ChainView) -> String {
    let mut s = String::from("prefix  orbit size\n");
    for (p, n) in r.prefixes.iter().zip(&r.orbit_sizes) {
        let _ = writeln!(s, "{p}  {n}");
    }
    let sizes: Vec<String> = r.orbit_sizes.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "chain: {}{}", sizes.join(","), if r.exceeded { " (cap reached)" } else { "" });
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationView {
    pub word: String,
    pub orbit_size: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyView {
    pub consistent: bool,
    pub words_checked: u64,
    pub violation: Option<ViolationView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessView {
    pub generators: Vec<String>,
    pub verdict: String,
    pub order: Option<usize>,
    pub largest_orbit_lower_bound: Option<usize>,
    pub growth: GrowthView,
    pub chain: Option<ChainView>,
    pub budgets: DecideBudgets,
    pub work: WorkUsed,
    pub consistency: Option<ConsistencyView>,
}

impl FinitenessView {
    pub fn new(
        m: &MealyAutomaton,
        generators: Vec<String>,
        v: &FinitenessVerdict,
        consistency: Option<ConsistencyReport>,
    ) -> Self {
        let consistency = consistency.map(|c| ConsistencyView {
            consistent: c.consistent,
            words_checked: c.words_checked,
            violation: c.violation.map(|x| ViolationView {
                word: m.alphabet().render_word(&x.word),
                orbit_size: x.orbit_size,
                detail: x.detail,
            }),
        });
        let (verdict, order, bound, report, chain) = match &v.outcome {
            Outcome::Finite { order, report } => ("finite", Some(*order), None, report, None),
            Outcome::Unknown {
                chain,
                largest_orbit_lower_bound,
                report,
            } => (
                "unknown",
                None,
                Some(*largest_orbit_lower_bound),
                report,
                Some(ChainView::new(m, generators.clone(), chain)),
            ),
        };
        FinitenessView {
            growth: GrowthView::new(m, generators.clone(), report),
            generators,
            verdict: verdict.into(),
            order,
            largest_orbit_lower_bound: bound,
            chain,
            budgets: v.budgets,
            work: v.work,
            consistency,
        }
    }
}

pub fn finiteness_text(r: &FinitenessView) -> String {
    let mut s = match (r.order, &r.chain) {
        (Some(n), _) => format!("FINITE, order {n}\n"),
        (None, Some(c)) => {
            let sizes: Vec<String> = c.orbit_sizes.iter().map(ToString::to_string).collect();
            format!(
                "UNKNOWN: no closure within {} elements; orbit sizes along witness chain: {}\n",
                r.budgets.enumeration.max_elements,
                sizes.join(",")
            )
        }
        (None, None) => "UNKNOWN\n".into(),
    };
    if let Some(c) = &r.consistency {
        match &c.violation {
            None => {
                let _ = writeln!(s, "consistency: ok ({} words checked)", c.words_checked);
            }
            Some(v) => {
                let _ = writeln!(s, "consistency: VIOLATION at {}: {}", v.word, v.detail);
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMap {
    pub generator: String,
    pub images: Vec<usize>,
    pub sections: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureView {
    pub generators: Vec<String>,
    pub basepoint: String,
    pub closed: bool,
    pub size: Option<usize>,
    pub cap: Option<usize>,
    pub points: Vec<String>,
    pub maps: Vec<GeneratorMap>,
}

impl SignatureView {
    pub fn new(m: &MealyAutomaton, generators: Vec<String>, sig: &OrbitSignature) -> Self {
        let maps = generators
            .iter()
            .enumerate()
            .map(|(g, name)| GeneratorMap {
                generator: name.clone(),
                images: sig.endomaps[g].clone(),
                sections: sig.sections[g].iter().map(|&q| m.state_name(q).to_owned()).collect(),
            })
            .collect();
        SignatureView {
            generators,
            basepoint: m.alphabet().render_word(&sig.points[0]),
            closed: true,
            size: Some(sig.size()),
            cap: None,
            points: sig.points.iter().map(|p| m.alphabet().render_word(p)).collect(),
            maps,
        }
    }

    pub fn exceeded(basepoint: String, generators: Vec<String>, cap: usize) -> Self {
        SignatureView {
            generators,
            basepoint,
            closed: false,
            size: None,
            cap: Some(cap),
            points: Vec::new(),
            maps: Vec::new(),
        }
    }
}

pub fn signature_text(r: &SignatureView) -> String {
    let Some(n) = r.size else {
        return format!("orbit of {}: cap {} exceeded\n", r.basepoint, r.cap.unwrap_or(0));
    };
    let mut s = format!("orbit of {}: size {n}\n", r.basepoint);
    for (l, p) in r.points.iter().enumerate() {
        let _ = writeln!(s, "  {l}: {p}");
    }
    for gm in &r.maps {
        let cells: Vec<String> = gm
            .images
            .iter()
            .zip(&gm.sections)
            .enumerate()
            .map(|(l, (t, q))| format!("{l}->{t}@{q}"))
            .collect();
        let _ = writeln!(s, "{}: {}", gm.generator, cells.join(" "));
    }
    s
}
