//! Machine checks of every claim over finite domains, addressable by id.
//!
//! Each check recomputes its claim from graph, switching and oracle
//! primitives. Nothing here calls into the solver, so a bug in a construction
//! cannot hide a false claim.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use crate::gen::{gen_normalized_range, gen_random_indexed, normalized_domain_size, NORMALIZED_MAX_N, NORMALIZED_MIN_N};
use crate::graph::{edge_count, SignedCompleteGraph, Vertex};
use crate::group::{pair_sums, SignCounts, SignSet, F22};
use crate::oracle::{hamiltonian_paths_spectrum, k4_path_report, CircleTable, DEFAULT_ENUMERATION_BOUND};
use crate::switching::normalize_at;

/// Largest exhaustive domain run without an explicit override (`4^10`).
pub const EXHAUSTIVE_CAP: u64 = 1 << 20;

macro_rules! lemma_ids {
    ($($variant:ident => $name:literal, $claim:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum LemmaId { $($variant),* }

        impl LemmaId {
            pub const ALL: &'static [LemmaId] = &[$(LemmaId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(LemmaId::$variant => $name),* }
            }

            /// The claim being checked, in one sentence.
            pub fn claim(self) -> &'static str {
                match self { $(LemmaId::$variant => $claim),* }
            }
        }

        impl FromStr for LemmaId {
            type Err = LabError;
            fn from_str(s: &str) -> Result<Self, LabError> {
                match s.trim() {
                    $($name => Ok(LemmaId::$variant),)*
                    other => Err(LabError::UnknownLemma(other.to_string())),
                }
            }
        }
    };
}

lemma_ids! {
    Lemma1 => "lemma1", "with at most three triangle signs, every K4 has at most two distinct triangle signs";
    Lemma5 => "lemma5", "with exactly three triangle signs, the triangles through any hub realize all three";
    Lemma22 => "lemma22", "with two triangle signs {x,y}, Hamiltonian signs lie in {x,y} (n odd) or {e,x+y} (n even)";
    Remark1 => "remark1", "with one triangle sign x, every Hamiltonian circle has sign (n-2)x";
    PropositionNorm => "proposition_norm", "normalizing at v clears the star at v and turns each edge uw into the triangle uwv";
    Lemma11 => "lemma11", "the sums y_i + z_j cover F2^2 exactly when one of y1,y2 lies in {z1,z2}";
    Lemma12 => "lemma12", "the sums y_i + z_j have shape {x,x,y,y} when {z1,z2} is {y1,y2} or its complement";
    Lemma14 => "lemma14", "K4 triangle signs sum to e, and without four distinct signs they read x,x,y,y";
    KeyLemma => "key_lemma", "in a K4 with four distinct triangle signs, every sign labels an even number of Hamiltonian paths";
    Table1 => "table1", "disjoint edge pairs agree with a circle sign exactly as tabulated, splitting their path groups accordingly";
    Lemma4 => "lemma4", "the six paths from any vertex have signs {p,p,q,q,s,s} or {p,q,s,t,t,t}";
    LemmaSame => "lemma_same", "repeated {r,r,s,s,t,t} start multisets, a common-sign triple of g, and no path of sign g are equivalent";
    Thm11 => "thm11", "some vertex starts four distinct-sign paths exactly when there is no common-sign triple";
    LemmaB => "lemma_b", "with exactly three triangle signs and n > 5, Hamiltonian circles realize all four signs";
    LemmaC => "lemma_c", "with at least three triangle signs and n > 5, Hamiltonian circles realize all four signs";
    CaseAlphaForest => "case_alpha_forest", "with four triangle signs and no all-distinct K4, hub-normalized distinct-sign edges form a forest";
    CaseBeta => "case_beta", "with an all-distinct K4 and n > 5, Hamiltonian circles realize all four signs";
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl LemmaId {
    pub fn is_group_identity(self) -> bool {
        matches!(self, LemmaId::Lemma11 | LemmaId::Lemma12)
    }

    /// Claims about a single `K_4`; on larger graphs they apply to every induced `K_4`.
    pub fn is_k4_claim(self) -> bool {
        matches!(
            self,
            LemmaId::Lemma14 | LemmaId::KeyLemma | LemmaId::Table1 | LemmaId::Lemma4 | LemmaId::LemmaSame | LemmaId::Thm11
        )
    }

    fn needs_spectrum(self) -> bool {
        matches!(self, LemmaId::Lemma22 | LemmaId::Remark1 | LemmaId::LemmaB | LemmaId::LemmaC | LemmaId::CaseBeta)
    }

    /// Smallest `n` the claim speaks about.
    fn min_n(self) -> usize {
        match self {
            LemmaId::LemmaB | LemmaId::LemmaC | LemmaId::CaseBeta => 6,
            LemmaId::CaseAlphaForest => 5,
            LemmaId::Lemma22 | LemmaId::Remark1 | LemmaId::Lemma5 | LemmaId::PropositionNorm => 3,
            _ => 4,
        }
    }

    pub fn default_scope(self) -> Scope {
        if self.is_group_identity() {
            Scope::ExhaustiveGroup
        } else if self.is_k4_claim() || self == LemmaId::Lemma1 {
            Scope::ExhaustiveK4
        } else {
            Scope::ExhaustiveNormalized(6)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    /// All `4^6` labelings of `K_4`.
    ExhaustiveK4,
    /// All `4^4` tuples `(y1, y2, z1, z2)`.
    ExhaustiveGroup,
    /// All labelings of `K_n` with the star at vertex 1 pinned to `e`.
    ExhaustiveNormalized(usize),
    /// `count` uniform instances of `K_n`; instance `i` uses stream `i` of `seed`.
    Random { n: usize, count: u64, seed: u64 },
}

impl Scope {
    pub fn domain_size(&self) -> u64 {
        match *self {
            Scope::ExhaustiveK4 => 1 << 12,
            Scope::ExhaustiveGroup => 1 << 8,
            Scope::ExhaustiveNormalized(n) => normalized_domain_size(n),
            Scope::Random { count, .. } => count,
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        !matches!(self, Scope::Random { .. })
    }

    /// Vertex count of the instances, if the scope holds graphs.
    pub fn order(&self) -> Option<usize> {
        match *self {
            Scope::ExhaustiveK4 => Some(4),
            Scope::ExhaustiveGroup => None,
            Scope::ExhaustiveNormalized(n) | Scope::Random { n, .. } => Some(n),
        }
    }

    pub fn description(&self) -> String {
        match *self {
            Scope::ExhaustiveK4 => String::from("all 4^6 = 4096 labelings of K4"),
            Scope::ExhaustiveGroup => String::from("all 4^4 = 256 tuples (y1, y2, z1, z2)"),
            Scope::ExhaustiveNormalized(n) => format!(
                "all 4^{} = {} labelings of K{n} with the star at vertex 1 pinned to e",
                edge_count(n - 1),
                normalized_domain_size(n)
            ),
            Scope::Random { n, count, seed } => format!("{count} uniform random labelings of K{n}, seed {seed}"),
        }
    }

    /// Parses `exhaustive_k4`, `exhaustive_group`, `exhaustive_normalized(N)`
    /// or `random(N,COUNT[,SEED])`; `default_seed` fills a missing seed.
    pub fn parse(s: &str, default_seed: u64) -> Result<Scope, LabError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || LabError::BadScope(s.clone());
        match s.as_str() {
            "exhaustive_k4" => return Ok(Scope::ExhaustiveK4),
            "exhaustive_group" => return Ok(Scope::ExhaustiveGroup),
            _ => {}
        }
        let (head, args) = s.split_once('(').ok_or_else(bad)?;
        let args = args.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<u64> = args.split(',').map(|a| a.parse::<u64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match (head, nums.as_slice()) {
            ("exhaustive_normalized", &[n]) => Ok(Scope::ExhaustiveNormalized(n as usize)),
            ("random", &[n, count]) => Ok(Scope::Random { n: n as usize, count, seed: default_seed }),
            ("random", &[n, count, seed]) => Ok(Scope::Random { n: n as usize, count, seed }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scope::ExhaustiveK4 => f.write_str("exhaustive_k4"),
            Scope::ExhaustiveGroup => f.write_str("exhaustive_group"),
            Scope::ExhaustiveNormalized(n) => write!(f, "exhaustive_normalized({n})"),
            Scope::Random { n, count, seed } => write!(f, "random({n},{count},{seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabError {
    UnknownLemma(String),
    BadScope(String),
    ScopeTooLarge { size: u64, cap: u64 },
    ScopeMismatch { lemma: LemmaId, scope: Scope, reason: String },
    RangeOutOfScope { end: u64, size: u64 },
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::UnknownLemma(id) => {
                write!(f, "unknown lemma id `{id}`; known ids: ")?;
                for (i, l) in LemmaId::ALL.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(l.as_str())?;
                }
                Ok(())
            }
            LabError::BadScope(s) => write!(
                f,
                "cannot parse scope `{s}`; expected exhaustive_k4, exhaustive_group, exhaustive_normalized(N) or random(N,COUNT[,SEED])"
            ),
            LabError::ScopeTooLarge { size, cap } => {
                write!(f, "exhaustive scope has {size} instances, above the cap of {cap}; pass the override to run it")
            }
            LabError::ScopeMismatch { lemma, scope, reason } => {
                write!(f, "{lemma} cannot be checked over {scope}: {reason}")
            }
            LabError::RangeOutOfScope { end, size } => write!(f, "range end {end} exceeds domain size {size}"),
        }
    }
}

impl core::error::Error for LabError {}

/// Checks that `id` is meaningful over `scope` and that the domain is not too large.
pub fn validate(id: LemmaId, scope: &Scope, allow_large: bool) -> Result<(), LabError> {
    let mismatch = |reason: String| Err(LabError::ScopeMismatch { lemma: id, scope: *scope, reason });
    if id.is_group_identity() != (*scope == Scope::ExhaustiveGroup) {
        return mismatch(if id.is_group_identity() {
            String::from("group identities are checked over exhaustive_group")
        } else {
            String::from("exhaustive_group holds group tuples, not graphs")
        });
    }
    if let Some(n) = scope.order() {
        if let Scope::ExhaustiveNormalized(_) = scope {
            if !(NORMALIZED_MIN_N..=NORMALIZED_MAX_N).contains(&n) {
                return mismatch(format!("exhaustive_normalized needs {NORMALIZED_MIN_N} <= n <= {NORMALIZED_MAX_N}"));
            }
        }
        if n > crate::graph::MAX_VERTICES {
            return mismatch(format!("n = {n} exceeds {}", crate::graph::MAX_VERTICES));
        }
        if n < id.min_n() {
            return mismatch(format!("the claim needs n >= {}", id.min_n()));
        }
        if id.needs_spectrum() && n > DEFAULT_ENUMERATION_BOUND {
            return mismatch(format!("spectrum enumeration is bounded at n = {DEFAULT_ENUMERATION_BOUND}"));
        }
    }
    if scope.is_exhaustive() && scope.domain_size() > EXHAUSTIVE_CAP && !allow_large {
        return Err(LabError::ScopeTooLarge { size: scope.domain_size(), cap: EXHAUSTIVE_CAP });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub index: u64,
    pub message: String,
}

/// Named counters gathered while scanning.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats(pub BTreeMap<String, u64>);

impl Stats {
    pub fn add(&mut self, key: &str, by: u64) {
        if let Some(v) = self.0.get_mut(key) {
            *v += by;
        } else {
            self.0.insert(key.to_string(), by);
        }
    }

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &Stats) {
        for (k, v) in &other.0 {
            self.add(k, *v);
        }
    }
}

/// Result of scanning part of a domain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RangeOutcome {
    pub scanned: u64,
    pub violations: Vec<Violation>,
    pub stats: Stats,
}

impl RangeOutcome {
    /// Appends a later range; violations stay ordered by index when ranges are merged in order.
    pub fn merge(&mut self, other: RangeOutcome) {
        self.scanned += other.scanned;
        self.violations.extend(other.violations);
        self.stats.merge(&other.stats);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The `K_4` labeling with the given index: base-4 digits over the six edges
/// in colexicographic order.
pub fn k4_instance(index: u64) -> SignedCompleteGraph {
    let signs = (0..6).map(|i| F22::from_bits((index >> (2 * i)) as u8)).collect();
    SignedCompleteGraph::from_edge_signs(4, signs).expect("six edges")
}

/// `(y1, y2, z1, z2)` for the given index, `y1` in the lowest two bits.
pub fn group_tuple(index: u64) -> [F22; 4] {
    [0, 1, 2, 3].map(|i| F22::from_bits((index >> (2 * i)) as u8))
}

/// Scans `range` of the domain of `scope` for violations of `id`.
pub fn check_range(id: LemmaId, scope: &Scope, range: Range<u64>) -> Result<RangeOutcome, LabError> {
    validate(id, scope, true)?;
    let size = scope.domain_size();
    if range.end > size {
        return Err(LabError::RangeOutOfScope { end: range.end, size });
    }
    let mut out = RangeOutcome::default();
    let record = |out: &mut RangeOutcome, index: u64, r: Result<(), String>| {
        out.scanned += 1;
        if let Err(message) = r {
            out.violations.push(Violation { index, message });
        }
    };
    match *scope {
        Scope::ExhaustiveGroup => {
            for index in range {
                let r = check_group(id, group_tuple(index), &mut out.stats);
                record(&mut out, index, r);
            }
        }
        Scope::ExhaustiveK4 => {
            let mut ctx = Context::new(4, id);
            for index in range {
                let r = check_graph(id, &k4_instance(index), &mut ctx, &mut out.stats);
                record(&mut out, index, r);
            }
        }
        Scope::ExhaustiveNormalized(n) => {
            let mut ctx = Context::new(n, id);
            let stream = gen_normalized_range(n, range.start, range.end)
                .map_err(|e| LabError::BadScope(e.to_string()))?;
            for (index, g) in range.zip(stream) {
                let r = check_graph(id, &g, &mut ctx, &mut out.stats);
                record(&mut out, index, r);
            }
        }
        Scope::Random { n, seed, .. } => {
            let mut ctx = Context::new(n, id);
            for index in range {
                let g = gen_random_indexed(n, seed, index);
                let r = check_graph(id, &g, &mut ctx, &mut out.stats);
                record(&mut out, index, r);
            }
        }
    }
    Ok(out)
}

/// Whole-domain sequential scan, subject to the size cap.
pub fn check_scope(id: LemmaId, scope: &Scope, allow_large: bool) -> Result<RangeOutcome, LabError> {
    validate(id, scope, allow_large)?;
    check_range(id, scope, 0..scope.domain_size())
}

fn check_group(id: LemmaId, [y1, y2, z1, z2]: [F22; 4], stats: &mut Stats) -> Result<(), String> {
    if y1 == y2 || y1.is_identity() || y2.is_identity() || z1 == z2 {
        return Ok(());
    }
    stats.add("qualifying tuples", 1);
    let sums = pair_sums(y1, y2, z1, z2).map_err(|e| format!("pair_sums rejected a qualifying tuple: {e}"))?;
    let counts = SignCounts::from_slice(&sums);
    let covers = counts.support().is_full();
    match id {
        LemmaId::Lemma11 => {
            let hypothesis = (z1 == y1 || z2 == y1) != (z1 == y2 || z2 == y2);
            if hypothesis {
                stats.add("hypothesis holds", 1);
            }
            if hypothesis != covers {
                return Err(format!(
                    "y=({y1},{y2}) z=({z1},{z2}): hypothesis {hypothesis} but sums {counts} cover F2^2: {covers}"
                ));
            }
        }
        LemmaId::Lemma12 => {
            let ys = SignSet::from_slice(&[y1, y2]);
            let zs = SignSet::from_slice(&[z1, z2]);
            let complement: SignSet = F22::ALL.iter().copied().filter(|&x| !ys.contains(x)).collect();
            if zs == ys || zs == complement {
                stats.add("hypothesis holds", 1);
                let mut shape = counts.shape();
                shape.sort_unstable();
                if shape != [0, 0, 2, 2] {
                    return Err(format!("y=({y1},{y2}) z=({z1},{z2}): sums {counts} are not of shape x,x,y,y"));
                }
            }
        }
        _ => unreachable!("validated as a group identity"),
    }
    Ok(())
}

/// Per-range state reused across instances.
struct Context {
    circles: Option<CircleTable>,
}

impl Context {
    fn new(n: usize, id: LemmaId) -> Self {
        let circles = if id.needs_spectrum() && n >= 3 { CircleTable::new(n).ok() } else { None };
        Context { circles }
    }

    fn spectrum(&self, g: &SignedCompleteGraph) -> SignSet {
        self.circles.as_ref().expect("spectrum table built for this claim").realized(g)
    }
}

fn triangle_sign_set(g: &SignedCompleteGraph) -> SignSet {
    let n = g.n();
    let mut set = SignSet::EMPTY;
    for u in 1..=n {
        for v in u + 1..=n {
            for w in v + 1..=n {
                set.insert(g.sign(u, v) + g.sign(v, w) + g.sign(u, w));
            }
        }
    }
    set
}

fn quads(n: usize) -> impl Iterator<Item = [Vertex; 4]> {
    (1..=n).flat_map(move |a| {
        (a + 1..=n).flat_map(move |b| (b + 1..=n).flat_map(move |c| (c + 1..=n).map(move |d| [a, b, c, d])))
    })
}

/// Triangle signs of a `K_4` on vertices `1..=4`, entry `i` omitting vertex `i + 1`.
fn k4_triangles(k: &SignedCompleteGraph) -> [F22; 4] {
    let t = |a, b, c| k.sign(a, b) + k.sign(b, c) + k.sign(a, c);
    [t(2, 3, 4), t(1, 3, 4), t(1, 2, 4), t(1, 2, 3)]
}

fn all_distinct(t: [F22; 4]) -> bool {
    SignSet::from_slice(&t).is_full()
}

fn check_graph(id: LemmaId, g: &SignedCompleteGraph, ctx: &mut Context, stats: &mut Stats) -> Result<(), String> {
    let n = g.n();
    if id.is_k4_claim() {
        for q in quads(n) {
            let k = if n == 4 { g.clone() } else { g.induced(&q) };
            stats.add("K4s examined", 1);
            check_k4(id, &k, stats).map_err(|m| if n == 4 { m } else { format!("K4 on {q:?}: {m}") })?;
        }
        return Ok(());
    }
    match id {
        LemmaId::Lemma1 => {
            if triangle_sign_set(g).len() > 3 {
                return Ok(());
            }
            stats.add("instances with at most three triangle signs", 1);
            for q in quads(n) {
                let k = g.induced(&q);
                let distinct = SignSet::from_slice(&k4_triangles(&k)).len();
                if distinct > 2 {
                    return Err(format!("K4 on {q:?} has {distinct} distinct triangle signs"));
                }
            }
        }
        LemmaId::Lemma5 => {
            let signs = triangle_sign_set(g);
            if signs.len() != 3 {
                return Ok(());
            }
            stats.add("three-sign instances", 1);
            for hub in 1..=n {
                let mut basis = SignSet::EMPTY;
                for u in (1..=n).filter(|&u| u != hub) {
                    for w in (u + 1..=n).filter(|&w| w != hub) {
                        basis.insert(g.sign(hub, u) + g.sign(u, w) + g.sign(hub, w));
                    }
                }
                if basis != signs {
                    return Err(format!("triangles through hub {hub} realize {basis}, not {signs}"));
                }
            }
        }
        LemmaId::Remark1 => {
            let signs = triangle_sign_set(g);
            if signs.len() != 1 {
                return Ok(());
            }
            stats.add("one-sign instances", 1);
            let x = signs.iter().next().unwrap();
            let expected = SignSet::from_slice(&[x.times(n - 2)]);
            let realized = ctx.spectrum(g);
            if !realized.is_subset(expected) {
                return Err(format!("triangle sign {x}: spectrum {realized} not within {expected}"));
            }
        }
        LemmaId::Lemma22 => {
            let signs = triangle_sign_set(g);
            if signs.len() != 2 {
                return Ok(());
            }
            stats.add("two-sign instances", 1);
            let mut it = signs.iter();
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            let bound = if n % 2 == 1 { SignSet::from_slice(&[x, y]) } else { SignSet::from_slice(&[F22::E, x + y]) };
            let realized = ctx.spectrum(g);
            if !realized.is_subset(bound) {
                return Err(format!("triangle signs {signs}: spectrum {realized} not within {bound}"));
            }
        }
        LemmaId::PropositionNorm => {
            for v in 1..=n {
                let (h, _) = normalize_at(g, v).map_err(|e| e.to_string())?;
                for u in (1..=n).filter(|&u| u != v) {
                    if !h.sign(u, v).is_identity() {
                        return Err(format!("normalizing at {v} leaves edge {u}{v} with sign {}", h.sign(u, v)));
                    }
                    for w in (u + 1..=n).filter(|&w| w != v) {
                        let old = g.sign(u, w) + g.sign(w, v) + g.sign(u, v);
                        if h.sign(u, w) != old {
                            return Err(format!(
                                "normalizing at {v}: edge {u}{w} became {} but triangle {u}{w}{v} was {old}",
                                h.sign(u, w)
                            ));
                        }
                    }
                }
                if triangle_sign_set(&h) != triangle_sign_set(g) {
                    return Err(format!("normalizing at {v} changed the triangle signs"));
                }
            }
            stats.add("normalizations checked", n as u64);
        }
        LemmaId::LemmaB | LemmaId::LemmaC => {
            let d = triangle_sign_set(g).len();
            let applies = if id == LemmaId::LemmaB { d == 3 } else { d >= 3 };
            if !applies {
                return Ok(());
            }
            stats.add(if d == 3 { "three-sign instances" } else { "four-sign instances" }, 1);
            let realized = ctx.spectrum(g);
            if !realized.is_full() {
                return Err(format!("{d} triangle signs but spectrum is only {realized}"));
            }
        }
        LemmaId::CaseBeta => {
            let Some(q) = quads(n).find(|q| all_distinct(k4_triangles(&g.induced(q)))) else {
                return Ok(());
            };
            stats.add("instances with an all-distinct K4", 1);
            let realized = ctx.spectrum(g);
            if !realized.is_full() {
                return Err(format!("all-distinct K4 on {q:?} but spectrum is only {realized}"));
            }
        }
        LemmaId::CaseAlphaForest => check_forest(g, stats)?,
        _ => unreachable!("every graph claim is handled"),
    }
    Ok(())
}

/// Shape of four edges that contain no circle.
fn forest_shape(edges: &[(Vertex, Vertex); 4]) -> Result<&'static str, String> {
    // Four edges contain a circle iff some connected component has at least
    // as many edges as vertices.
    let mut comp: Vec<Vec<Vertex>> = Vec::new();
    let mut comp_edges: Vec<usize> = Vec::new();
    for &(u, v) in edges {
        let cu = comp.iter().position(|c| c.contains(&u));
        let cv = comp.iter().position(|c| c.contains(&v));
        match (cu, cv) {
            (Some(a), Some(b)) if a == b => comp_edges[a] += 1,
            (Some(a), Some(b)) => {
                let (lo, hi) = (a.min(b), a.max(b));
                let moved = comp.remove(hi);
                let moved_edges = comp_edges.remove(hi);
                comp[lo].extend(moved);
                comp_edges[lo] += moved_edges + 1;
            }
            (Some(a), None) => {
                comp[a].push(v);
                comp_edges[a] += 1;
            }
            (None, Some(b)) => {
                comp[b].push(u);
                comp_edges[b] += 1;
            }
            (None, None) => {
                comp.push(alloc::vec![u, v]);
                comp_edges.push(1);
            }
        }
    }
    for (c, &e) in comp.iter().zip(&comp_edges) {
        if e >= c.len() {
            return Err(format!("edges {edges:?} contain a circle"));
        }
    }
    let degree = |x: Vertex| edges.iter().filter(|&&(u, v)| u == x || v == x).count();
    let max = edges.iter().flat_map(|&(u, v)| [degree(u), degree(v)]).max().unwrap();
    Ok(match max {
        4 => "shape: common vertex",
        3 => {
            let center = edges.iter().flat_map(|&(u, v)| [u, v]).find(|&x| degree(x) == 3).unwrap();
            let (fu, fv) = *edges.iter().find(|&&(u, v)| u != center && v != center).unwrap();
            if degree(fu) + degree(fv) > 2 {
                "shape: star plus attached edge"
            } else {
                "shape: star plus disjoint edge"
            }
        }
        _ => "shape: linear forest",
    })
}

fn check_forest(g: &SignedCompleteGraph, stats: &mut Stats) -> Result<(), String> {
    let n = g.n();
    if !triangle_sign_set(g).is_full() {
        return Ok(());
    }
    if quads(n).any(|q| all_distinct(k4_triangles(&g.induced(&q)))) {
        return Ok(());
    }
    stats.add("four-sign instances without an all-distinct K4", 1);
    for hub in 1..=n {
        // After normalizing the hub, edge uw carries the sign of triangle hub-u-w.
        let mut chosen: [Option<(Vertex, Vertex)>; 4] = [None; 4];
        for w in 2..=n {
            for u in 1..w {
                if u == hub || w == hub {
                    continue;
                }
                let s = g.sign(hub, u) + g.sign(u, w) + g.sign(hub, w);
                chosen[s.index()].get_or_insert((u, w));
            }
        }
        let mut edges = [(0, 0); 4];
        for (i, c) in chosen.iter().enumerate() {
            edges[i] = c.ok_or_else(|| format!("no triangle through hub {hub} has sign {}", F22::ALL[i]))?;
        }
        let shape = forest_shape(&edges).map_err(|m| format!("hub {hub}: {m}"))?;
        stats.add(shape, 1);
    }
    Ok(())
}

/// The six directed Hamiltonian paths of a `K_4` from `start`, with signs.
fn start_path_counts(k: &SignedCompleteGraph, start: Vertex) -> Result<SignCounts, String> {
    hamiltonian_paths_spectrum(k, start).map_err(|e| e.to_string())
}

/// Exactly three edges of sign `g` that share a vertex or form a triangle.
fn has_common_triple(k: &SignedCompleteGraph, g: F22) -> bool {
    let edges: Vec<(Vertex, Vertex)> = k.edges().into_iter().filter(|e| e.2 == g).map(|e| (e.0, e.1)).collect();
    if edges.len() != 3 {
        return false;
    }
    let mut touched: Vec<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    touched.sort_unstable();
    touched.dedup();
    let star = (1..=4).any(|x| edges.iter().all(|&(u, v)| u == x || v == x));
    star || touched.len() == 3
}

/// Relabels an all-distinct `K_4` so that vertices 1, 2, 3, 4 lie opposite
/// the triangles of sign e, c, b, a.
fn canonical_relabel(k: &SignedCompleteGraph, t: [F22; 4]) -> SignedCompleteGraph {
    let opposite = |s: F22| t.iter().position(|&x| x == s).unwrap() + 1;
    let old = [opposite(F22::E), opposite(F22::C), opposite(F22::B), opposite(F22::A)];
    let mut signs = Vec::new();
    for i in 1..=4 {
        for j in i + 1..=4 {
            signs.push((i, j, k.sign(old[i - 1], old[j - 1])));
        }
    }
    SignedCompleteGraph::build(4, &signs).expect("relabeling is a bijection")
}

fn check_k4(id: LemmaId, k: &SignedCompleteGraph, stats: &mut Stats) -> Result<(), String> {
    let t = k4_triangles(k);
    let distinct = all_distinct(t);
    if id == LemmaId::Lemma14 {
        let sum: F22 = t.iter().copied().sum();
        if !sum.is_identity() {
            return Err(format!("triangle signs {t:?} sum to {sum}"));
        }
        if !distinct {
            stats.add("K4s without four distinct triangle signs", 1);
            let mut s = t;
            s.sort_unstable();
            if s[0] != s[1] || s[2] != s[3] {
                return Err(format!("triangle signs {t:?} are not of shape x,x,y,y"));
            }
        }
        return Ok(());
    }
    if !distinct {
        return Ok(());
    }
    stats.add("all-distinct K4s", 1);
    match id {
        LemmaId::KeyLemma => {
            let report = k4_path_report(k).map_err(|e| e.to_string())?;
            if report.totals.total() != 12 {
                return Err(format!("{} Hamiltonian paths instead of 12", report.totals.total()));
            }
            if report.totals.0.iter().any(|c| c % 2 == 1) {
                return Err(format!("path sign counts {:?} include an odd count", report.totals.0));
            }
        }
        LemmaId::Table1 => {
            let c = canonical_relabel(k, t);
            let (c1, c2, c3) = (c.cycle_sign(&[1, 2, 3, 4]), c.cycle_sign(&[1, 2, 4, 3]), c.cycle_sign(&[1, 3, 2, 4]));
            if (c1, c2, c3) != (F22::B, F22::A, F22::C) {
                return Err(format!("canonical circles have signs {c1},{c2},{c3}, not b,a,c"));
            }
            // Each disjoint pair lies on two of the three circles; its paths are
            // those circles with one of the pair's edges removed.
            let pairs = [((1, 2), (3, 4), [c1, c2]), ((1, 4), (2, 3), [c1, c3]), ((1, 3), (2, 4), [c2, c3])];
            const ROWS: [[(F22, bool); 3]; 4] = [
                [(F22::A, true), (F22::C, true), (F22::E, false)],
                [(F22::E, false), (F22::B, true), (F22::A, true)],
                [(F22::B, true), (F22::E, false), (F22::C, true)],
                [(F22::C, false), (F22::A, false), (F22::B, false)],
            ];
            let mut row = [(F22::E, false); 3];
            for (i, &(e1, e2, circles)) in pairs.iter().enumerate() {
                let (z1, z2) = (c.sign(e1.0, e1.1), c.sign(e2.0, e2.1));
                let sum = z1 + z2;
                let agrees = circles.contains(&sum);
                row[i] = (sum, agrees);
                let paths = SignCounts::from_slice(&[circles[0] + z1, circles[0] + z2, circles[1] + z1, circles[1] + z2]);
                let mut shape = paths.shape();
                shape.sort_unstable();
                let ok = if agrees { shape == [1, 1, 1, 1] } else { shape == [0, 0, 2, 2] };
                if !ok {
                    return Err(format!(
                        "pair {}{}|{}{} with sum {sum} ({}) has path signs {paths}",
                        e1.0,
                        e1.1,
                        e2.0,
                        e2.1,
                        if agrees { "agree" } else { "not agree" }
                    ));
                }
            }
            let Some(r) = ROWS.iter().position(|r| *r == row) else {
                return Err(format!("pair sums {row:?} match no tabulated case"));
            };
            stats.add(["case 1", "case 2", "case 3", "case 4"][r], 1);
        }
        LemmaId::Lemma4 => {
            for start in 1..=4 {
                let counts = start_path_counts(k, start)?;
                let mut shape = counts.shape();
                shape.sort_unstable();
                match shape {
                    [0, 2, 2, 2] => stats.add("starts with p,p,q,q,s,s", 1),
                    [1, 1, 1, 3] => stats.add("starts with p,q,s,t,t,t", 1),
                    _ => return Err(format!("paths from {start} have signs {counts}")),
                }
            }
        }
        LemmaId::LemmaSame | LemmaId::Thm11 => {
            let starts: Vec<SignCounts> = (1..=4).map(|s| start_path_counts(k, s)).collect::<Result<_, _>>()?;
            let all_paths = k4_path_report(k).map_err(|e| e.to_string())?.totals;
            let triples: Vec<F22> = F22::ALL.iter().copied().filter(|&g| has_common_triple(k, g)).collect();
            if id == LemmaId::LemmaSame {
                for g in F22::ALL {
                    let missing_pattern = |c: &SignCounts| F22::ALL.iter().all(|&x| c.count(x) == if x == g { 0 } else { 2 });
                    let repeated = (0..4).any(|i| {
                        (i + 1..4).any(|j| starts[i] == starts[j] && missing_pattern(&starts[i]))
                    });
                    let triple = triples.contains(&g);
                    let no_path = all_paths.count(g) == 0;
                    if !(repeated == triple && triple == no_path) {
                        return Err(format!(
                            "sign {g}: repeated start multisets {repeated}, common-sign triple {triple}, no path {no_path}"
                        ));
                    }
                    if triple {
                        stats.add("common-sign triples", 1);
                    }
                }
            } else {
                let four_from_one = starts.iter().any(|c| c.support().is_full());
                if four_from_one == !triples.is_empty() {
                    return Err(format!(
                        "four distinct path signs from one start: {four_from_one}; common-sign triples: {triples:?}"
                    ));
                }
                if four_from_one {
                    stats.add("four distinct signs from some start", 1);
                }
            }
        }
        _ => unreachable!("every K4 claim is handled"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for &id in LemmaId::ALL {
            assert_eq!(id.as_str().parse::<LemmaId>().unwrap(), id);
        }
        assert_eq!(LemmaId::ALL.len(), 17);
        assert!(matches!("lemma99".parse::<LemmaId>(), Err(LabError::UnknownLemma(_))));
    }

    #[test]
    fn scope_parsing() {
        assert_eq!(Scope::parse("exhaustive_k4", 0).unwrap(), Scope::ExhaustiveK4);
        assert_eq!(Scope::parse("exhaustive_normalized(6)", 0).unwrap(), Scope::ExhaustiveNormalized(6));
        assert_eq!(
            Scope::parse("random(7, 1000)", 9).unwrap(),
            Scope::Random { n: 7, count: 1000, seed: 9 }
        );
        assert_eq!(
            Scope::parse("random(7,1000,3)", 9).unwrap(),
            Scope::Random { n: 7, count: 1000, seed: 3 }
        );
        assert!(Scope::parse("random(7)", 0).is_err());
        assert!(Scope::parse("everything", 0).is_err());
        let s = Scope::Random { n: 7, count: 10, seed: 3 };
        assert_eq!(Scope::parse(&s.to_string(), 0).unwrap(), s);
    }

    #[test]
    fn scope_validation() {
        assert!(validate(LemmaId::Lemma11, &Scope::ExhaustiveK4, false).is_err());
        assert!(validate(LemmaId::KeyLemma, &Scope::ExhaustiveGroup, false).is_err());
        assert!(validate(LemmaId::LemmaC, &Scope::ExhaustiveK4, false).is_err());
        assert!(validate(LemmaId::LemmaB, &Scope::ExhaustiveNormalized(5), false).is_err());
        assert_eq!(
            validate(LemmaId::Lemma1, &Scope::ExhaustiveNormalized(7), false),
            Err(LabError::ScopeTooLarge { size: 1 << 30, cap: EXHAUSTIVE_CAP })
        );
        assert!(validate(LemmaId::Lemma1, &Scope::ExhaustiveNormalized(7), true).is_ok());
        assert!(validate(LemmaId::LemmaC, &Scope::Random { n: 11, count: 1, seed: 0 }, false).is_err());
        assert!(validate(LemmaId::Lemma1, &Scope::ExhaustiveNormalized(8), true).is_err());
    }

    #[test]
    fn group_identities_pass() {
        for id in [LemmaId::Lemma11, LemmaId::Lemma12] {
            let out = check_scope(id, &Scope::ExhaustiveGroup, false).unwrap();
            assert_eq!(out.scanned, 256);
            assert!(out.passed(), "{id}: {:?}", out.violations);
        }
        let out = check_scope(LemmaId::Lemma11, &Scope::ExhaustiveGroup, false).unwrap();
        // y1 != y2 nonzero: 6 ordered pairs; z1 != z2: 12 ordered pairs.
        assert_eq!(out.stats.get("qualifying tuples"), 72);
    }

    #[test]
    fn k4_claims_pass() {
        for &id in LemmaId::ALL.iter().filter(|id| id.is_k4_claim()) {
            let out = check_scope(id, &Scope::ExhaustiveK4, false).unwrap();
            assert_eq!(out.scanned, 4096);
            assert!(out.passed(), "{id}: {:?}", &out.violations[..out.violations.len().min(3)]);
        }
        let out = check_scope(LemmaId::KeyLemma, &Scope::ExhaustiveK4, false).unwrap();
        // Four distinct triangle signs: 4! assignments of triangle signs times the
        // 4 labelings per triangle-sign vector (switching classes of K4 by vertex 1).
        assert_eq!(out.stats.get("all-distinct K4s"), 4 * 4 * 24 * 4);
    }

    #[test]
    fn graph_claims_pass_on_small_domains() {
        for &id in LemmaId::ALL.iter().filter(|id| !id.is_group_identity()) {
            let scope = if id.min_n() > 5 {
                Scope::Random { n: 6, count: 200, seed: 1 }
            } else {
                Scope::ExhaustiveNormalized(5)
            };
            let out = check_scope(id, &scope, false).unwrap();
            assert!(out.passed(), "{id}: {:?}", &out.violations[..out.violations.len().min(3)]);
            assert_eq!(out.scanned, scope.domain_size());
        }
    }

    #[test]
    fn ranges_partition_the_domain() {
        let scope = Scope::ExhaustiveNormalized(5);
        let whole = check_scope(LemmaId::Lemma5, &scope, false).unwrap();
        let mut merged = check_range(LemmaId::Lemma5, &scope, 0..1000).unwrap();
        merged.merge(check_range(LemmaId::Lemma5, &scope, 1000..4096).unwrap());
        assert_eq!(merged, whole);
        assert!(check_range(LemmaId::Lemma5, &scope, 0..5000).is_err());
    }

    #[test]
    fn false_claim_is_caught() {
        // A spectrum claim that fails: with two triangle signs the spectrum is never full.
        let mut g = SignedCompleteGraph::identity(6);
        g.set_sign(2, 3, F22::A);
        let mut ctx = Context::new(6, LemmaId::LemmaC);
        assert!(!ctx.spectrum(&g).is_full());
        let mut stats = Stats::default();
        // Not applicable (two signs), so no violation.
        assert!(check_graph(LemmaId::LemmaC, &g, &mut ctx, &mut stats).is_ok());
        assert!(forest_shape(&[(2, 3), (3, 4), (2, 4), (5, 6)]).is_err());
        assert_eq!(forest_shape(&[(2, 3), (2, 4), (2, 5), (2, 6)]), Ok("shape: common vertex"));
        assert_eq!(forest_shape(&[(2, 3), (2, 4), (2, 6), (5, 6)]), Ok("shape: star plus attached edge"));
        assert_eq!(forest_shape(&[(2, 3), (2, 4), (2, 5), (6, 7)]), Ok("shape: star plus disjoint edge"));
        assert_eq!(forest_shape(&[(2, 3), (4, 5), (5, 6), (8, 9)]), Ok("shape: linear forest"));
    }
}
