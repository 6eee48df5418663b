//! Output documents. Integers and rationals of the underlying mathematics
//! are strings (`"p/q"`, or `"p"` when integral) so that nothing is ever
//! rounded; counts are JSON numbers. Generator numbers start at 1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetEntry {
    pub normal: Vec<String>,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub generators: Vec<Vec<String>>,
    pub labels: Vec<String>,
    pub alpha: Vec<String>,
    /// The grading form `h`.
    pub grading: Vec<String>,
    /// Basis of the relation lattice, one row per relation.
    pub relations: Vec<Vec<String>>,
    pub facets: Vec<FacetEntry>,
    pub volume: String,
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateEntry {
    pub k: String,
    /// `k * alpha`.
    pub alpha: Vec<String>,
    pub signature: usize,
    pub maximal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex_points: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpTerm {
    pub exponent: Vec<u32>,
    pub coefficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpSolution {
    pub beta: Vec<String>,
    pub terms: Vec<ModpTerm>,
    pub residual_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    /// Chart index `u`.
    pub u: Vec<u32>,
    pub exponent: Vec<String>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Check {
        irreducible: bool,
        algebraic: bool,
        /// `"full"`, or `"restricted"` when `--k` limited the sweep.
        sweep: String,
        denominator: String,
        per_k: Vec<ConjugateEntry>,
    },
    Apex {
        per_k: Vec<ConjugateEntry>,
    },
    Volume {
        volume: String,
    },
    Irreducible {
        irreducible: bool,
        /// Generator sets of the faces met by `alpha + Z^r`; `[]` is the origin.
        meeting_faces: Vec<Vec<usize>>,
    },
    Modp {
        p: u64,
        rho: String,
        lift: Vec<String>,
        rank: usize,
        signature: usize,
        solutions: Vec<ModpSolution>,
    },
    Series {
        order: u32,
        verified_order: i64,
        gamma: Vec<String>,
        chart: Vec<usize>,
        directions: Vec<Vec<String>>,
        prefactor: Vec<String>,
        terms: Vec<SeriesTerm>,
        checked: usize,
        annihilated: bool,
    },
    VerifyG3 {
        a: String,
        order: u32,
        holds: bool,
    },
    Error {
        error: String,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSummary>,
    pub payload: Payload,
    pub exit_status: i32,
}

impl Report {
    /// Pretty JSON with keys sorted at every level.
    pub fn to_machine(&self) -> String {
        // serde_json's map is a BTreeMap, so going through Value sorts keys
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => self.to_machine(),
            Format::Human => self.to_human(),
        }
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        if let Some(sys) = &self.system {
            write_summary(&mut out, sys);
        }
        write_payload(&mut out, &self.payload);
        out
    }
}

fn tuple(xs: &[String]) -> String {
    format!("({})", xs.join(", "))
}

fn write_summary(out: &mut String, s: &SystemSummary) {
    if let Some(name) = &s.name {
        let _ = writeln!(out, "system: {name}");
    }
    let _ = writeln!(out, "r = {}, N = {}", s.r, s.n);
    for (label, g) in s.labels.iter().zip(&s.generators) {
        let _ = writeln!(out, "  {label} = {}", tuple(g));
    }
    let _ = writeln!(out, "alpha = {}", tuple(&s.alpha));
    let _ = writeln!(out, "h = {}", tuple(&s.grading));
    let _ = writeln!(out, "relations:");
    for l in &s.relations {
        let _ = writeln!(out, "  {}", tuple(l));
    }
    let _ = writeln!(out, "facets:");
    for f in &s.facets {
        let gens: Vec<String> = f.generators.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(
            out,
            "  {}  through {{{}}}",
            tuple(&f.normal),
            gens.join(", ")
        );
    }
    let _ = writeln!(out, "volume = {}", s.volume);
    let _ = writeln!(out, "saturated = {}", s.saturated);
}

fn write_conjugates(out: &mut String, per_k: &[ConjugateEntry]) {
    for e in per_k {
        let _ = writeln!(
            out,
            "  k = {}: sigma = {}{}  at {}",
            e.k,
            e.signature,
            if e.maximal { " (maximal)" } else { "" },
            tuple(&e.alpha)
        );
        for p in e.apex_points.iter().flatten() {
            let _ = writeln!(out, "    {}", tuple(p));
        }
    }
}

fn write_payload(out: &mut String, payload: &Payload) {
    match payload {
        Payload::Check {
            irreducible,
            algebraic,
            sweep,
            denominator,
            per_k,
        } => {
            let _ = writeln!(out, "irreducible = {irreducible}");
            let _ = writeln!(out, "denominator = {denominator}, sweep = {sweep}");
            write_conjugates(out, per_k);
            let _ = writeln!(out, "algebraic = {algebraic}");
        }
        Payload::Apex { per_k } => write_conjugates(out, per_k),
        Payload::Volume { volume } => {
            let _ = writeln!(out, "{volume}");
        }
        Payload::Irreducible {
            irreducible,
            meeting_faces,
        } => {
            let _ = writeln!(out, "irreducible = {irreducible}");
            for face in meeting_faces {
                let gens: Vec<String> = face.iter().map(|g| g.to_string()).collect();
                let _ = writeln!(out, "  meets face {{{}}}", gens.join(", "));
            }
        }
        Payload::Modp {
            p,
            rho,
            lift,
            rank,
            signature,
            solutions,
        } => {
            let _ = writeln!(out, "p = {p}, rho = {rho}, lift = {}", tuple(lift));
            let _ = writeln!(out, "rank = {rank}, sigma(rho alpha) = {signature}");
            for s in solutions {
                let _ = writeln!(
                    out,
                    "  beta = {}: {} terms, residual {}",
                    tuple(&s.beta),
                    s.terms.len(),
                    if s.residual_zero { "zero" } else { "NONZERO" }
                );
            }
        }
        Payload::Series {
            order,
            verified_order,
            gamma,
            chart,
            directions,
            prefactor,
            terms,
            checked,
            annihilated,
        } => {
            let _ = writeln!(out, "gamma = {}", tuple(gamma));
            let chart: Vec<String> = chart.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "chart = {{{}}}", chart.join(", "));
            for d in directions {
                let _ = writeln!(out, "  direction {}", tuple(d));
            }
            let _ = writeln!(out, "prefactor = {}", tuple(prefactor));
            for t in terms {
                let u: Vec<String> = t.u.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "  u = {}: {}", tuple(&u), t.coefficient);
            }
            let _ = writeln!(
                out,
                "order = {order}, verified through {verified_order}, {checked} checks, annihilated = {annihilated}"
            );
        }
        Payload::VerifyG3 { a, order, holds } => {
            let _ = writeln!(out, "a = {a}, order = {order}: closed form holds = {holds}");
        }
        Payload::Error { error, message } => {
            let _ = writeln!(out, "error ({error}): {message}");
        }
    }
}
