//! Seeded synthetic corpora with planted, grammar-conformant citations.
//!
//! The generator lays out titles, organizational levels and sections, writes
//! Zipf-distributed pseudo-word text, and embeds citation strings whose
//! targets are recorded as ground truth. Everything is drawn from a single
//! ChaCha stream, so the seed fully determines the output.

use std::collections::HashSet;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, LogNormal, Zipf};
use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::model::{CodeGraph, GraphBuilder, LevelKind, NodeId, NodePath};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub snapshot_date: NaiveDate,
    pub title_count: u32,
    /// Maximum organizational levels between a title and its sections (0..=5).
    pub max_depth: u32,
    pub branching_min: u32,
    pub branching_max: u32,
    pub sections_min: u32,
    pub sections_max: u32,
    /// Probability that a section's text is spread over subdivisions.
    pub subdivision_prob: f64,
    /// Deepest subdivision level used, 1 = subsection .. 5 = subclause.
    pub max_subdivision_depth: u32,
    /// Log-normal parameters of pseudo-words per section.
    pub words_log_mean: f64,
    pub words_log_sd: f64,
    /// Mean citation phrases per section (geometric).
    pub citations_mean: f64,
    /// Probability that a cited target is drawn proportionally to how often
    /// it was cited before, rather than uniformly.
    pub preferential_prob: f64,
    pub self_reference_rate: f64,
    pub unresolved_rate: f64,
    pub vocabulary_size: u32,
    pub zipf_exponent: f64,
    /// Structural node target (root, organizational levels and sections,
    /// i.e. the node count after folding). Section counts are rescaled to
    /// meet it.
    pub target_nodes: Option<u32>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec::small(0)
    }
}

impl SyntheticSpec {
    /// A few titles and a few hundred sections.
    pub fn small(seed: u64) -> Self {
        SyntheticSpec {
            seed,
            snapshot_date: NaiveDate::from_ymd_opt(2008, 10, 1).expect("valid date"),
            title_count: 3,
            max_depth: 2,
            branching_min: 1,
            branching_max: 3,
            sections_min: 2,
            sections_max: 12,
            subdivision_prob: 0.4,
            max_subdivision_depth: 3,
            words_log_mean: 4.0,
            words_log_sd: 0.8,
            citations_mean: 1.5,
            preferential_prob: 0.5,
            self_reference_rate: 0.03,
            unresolved_rate: 0.03,
            vocabulary_size: 2000,
            zipf_exponent: 1.07,
            target_nodes: None,
        }
    }

    /// Magnitudes comparable to the full federal code: 49 titles, about
    /// 58,000 structural nodes and on the order of 23 million tokens.
    pub fn code_scale(seed: u64) -> Self {
        SyntheticSpec {
            title_count: 49,
            max_depth: 3,
            branching_min: 2,
            branching_max: 5,
            sections_min: 3,
            sections_max: 30,
            subdivision_prob: 0.3,
            words_log_mean: 5.29,
            words_log_sd: 1.1,
            citations_mean: 1.15,
            vocabulary_size: 30_000,
            target_nodes: Some(58_000),
            ..SyntheticSpec::small(seed)
        }
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        let fail = |m: &str| Err(IngestError::InvalidSpec(m.to_string()));
        if self.title_count == 0 {
            return fail("title_count must be positive");
        }
        if self.max_depth > 5 {
            return fail("max_depth must be at most 5");
        }
        if self.branching_min == 0 || self.branching_min > self.branching_max {
            return fail("branching range must satisfy 1 <= min <= max");
        }
        if self.sections_min == 0 || self.sections_min > self.sections_max {
            return fail("sections range must satisfy 1 <= min <= max");
        }
        if !(1..=5).contains(&self.max_subdivision_depth) {
            return fail("max_subdivision_depth must be in 1..=5");
        }
        for (name, p) in [
            ("subdivision_prob", self.subdivision_prob),
            ("preferential_prob", self.preferential_prob),
            ("self_reference_rate", self.self_reference_rate),
            ("unresolved_rate", self.unresolved_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(&format!("{name} must be a probability"));
            }
        }
        if self.self_reference_rate + self.unresolved_rate > 1.0 {
            return fail("self_reference_rate + unresolved_rate must not exceed 1");
        }
        if !(self.words_log_sd >= 0.0) || !self.words_log_mean.is_finite() {
            return fail("word-count distribution parameters are invalid");
        }
        if !(self.citations_mean >= 0.0) {
            return fail("citations_mean must be non-negative");
        }
        if self.vocabulary_size < 10 {
            return fail("vocabulary_size must be at least 10");
        }
        if !(self.zipf_exponent > 0.0) {
            return fail("zipf_exponent must be positive");
        }
        if self.target_nodes == Some(0) {
            return fail("target_nodes must be positive");
        }
        Ok(())
    }
}

/// Citations the generator embedded, under the default extraction settings
/// (ranges contribute their two endpoints).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlantedCitations {
    /// Source section → target section, with multiplicity.
    pub edges: Vec<(NodePath, NodePath)>,
    pub self_references: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub graph: CodeGraph,
    pub truth: PlantedCitations,
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<CodeGraph, IngestError> {
    generate_synthetic_with_truth(spec).map(|c| c.graph)
}

const ORG_PREFERENCE: [LevelKind; 5] = [
    LevelKind::Chapter,
    LevelKind::Subchapter,
    LevelKind::Part,
    LevelKind::Subtitle,
    LevelKind::Subpart,
];

const SUBDIVISIONS: [LevelKind; 5] = [
    LevelKind::Subsection,
    LevelKind::Paragraph,
    LevelKind::Subparagraph,
    LevelKind::Clause,
    LevelKind::Subclause,
];

const RESERVED: &[&str] = &[
    "section", "sections", "title", "chapter", "this", "of", "and", "or", "through",
];

enum Skeleton {
    Org {
        level: LevelKind,
        num: String,
        children: Vec<Skeleton>,
    },
    Sections(u32),
}

struct SectionPlan {
    title: usize,
    chapter: Option<NodePath>,
    path: NodePath,
    number: String,
    /// Assembled text segments: words (with trailing punctuation) and whole
    /// citation phrases.
    segments: Vec<String>,
}

fn designation(level: LevelKind, index: usize) -> String {
    match level {
        LevelKind::Subtitle | LevelKind::Subpart | LevelKind::Subparagraph => letters(index, true),
        LevelKind::Subsection => letters(index, false),
        LevelKind::Subchapter | LevelKind::Subclause => roman(index + 1).to_uppercase(),
        LevelKind::Clause => roman(index + 1),
        _ => (index + 1).to_string(),
    }
}

fn letters(mut index: usize, upper: bool) -> String {
    let base = if upper { b'A' } else { b'a' };
    let mut out = Vec::new();
    loop {
        out.push(base + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

fn roman(mut n: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "m"),
        (900, "cm"),
        (500, "d"),
        (400, "cd"),
        (100, "c"),
        (90, "xc"),
        (50, "l"),
        (40, "xl"),
        (10, "x"),
        (9, "ix"),
        (5, "v"),
        (4, "iv"),
        (1, "i"),
    ];
    let mut out = String::new();
    for (value, glyph) in TABLE {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}

fn vocabulary(rng: &mut ChaCha8Rng, size: usize) -> Vec<String> {
    const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let mut seen = HashSet::with_capacity(size);
    let mut words = Vec::with_capacity(size);
    while words.len() < size {
        let syllables = rng.gen_range(1..=4);
        let mut w = String::with_capacity(syllables * 2);
        for _ in 0..syllables {
            w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
            w.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
        }
        if !RESERVED.contains(&w.as_str()) && seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

struct Generator<'s> {
    spec: &'s SyntheticSpec,
    rng: ChaCha8Rng,
    vocab: Vec<String>,
    zipf: Zipf<f64>,
}

impl Generator<'_> {
    fn word(&mut self) -> &str {
        let rank = self.zipf.sample(&mut self.rng) as usize;
        &self.vocab[rank.clamp(1, self.vocab.len()) - 1]
    }

    fn phrase(&mut self, words: usize, upper: bool) -> String {
        (0..words)
            .map(|_| {
                let w = self.word().to_string();
                if upper {
                    w.to_uppercase()
                } else {
                    capitalize(&w)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn title_skeleton(&mut self, title_index: usize) -> Skeleton {
        let depth = self.rng.gen_range(0..=self.spec.max_depth) as usize;
        let mut levels: Vec<LevelKind> = ORG_PREFERENCE[..depth].to_vec();
        levels.sort();
        let children = self.org_children(&levels);
        Skeleton::Org {
            level: LevelKind::Title,
            num: (title_index + 1).to_string(),
            children,
        }
    }

    fn org_children(&mut self, levels: &[LevelKind]) -> Vec<Skeleton> {
        match levels.split_first() {
            None => vec![Skeleton::Sections(
                self.rng.gen_range(self.spec.sections_min..=self.spec.sections_max),
            )],
            Some((&level, rest)) => {
                let n = self.rng.gen_range(self.spec.branching_min..=self.spec.branching_max) as usize;
                (0..n)
                    .map(|i| Skeleton::Org {
                        level,
                        num: designation(level, i),
                        children: self.org_children(rest),
                    })
                    .collect()
            }
        }
    }
}

fn census(s: &Skeleton, org: &mut u64, sections: &mut u64) {
    match s {
        Skeleton::Org { children, .. } => {
            *org += 1;
            for c in children {
                census(c, org, sections);
            }
        }
        Skeleton::Sections(n) => *sections += u64::from(*n),
    }
}

fn rescale(s: &mut Skeleton, factor: f64) {
    match s {
        Skeleton::Org { children, .. } => children.iter_mut().for_each(|c| rescale(c, factor)),
        Skeleton::Sections(n) => *n = ((f64::from(*n) * factor).round() as u32).max(1),
    }
}

enum Planned {
    Org {
        parent: Option<usize>,
        level: LevelKind,
        num: String,
        heading: String,
    },
    Section {
        parent: usize,
        plan: usize,
    },
}

fn flatten(
    s: &Skeleton,
    parent: Option<usize>,
    parent_path: &NodePath,
    title: usize,
    next_section: &mut u64,
    g: &mut Generator<'_>,
    items: &mut Vec<Planned>,
    plans: &mut Vec<SectionPlan>,
) {
    match s {
        Skeleton::Org { level, num, children } => {
            let words = g.rng.gen_range(1..=4);
            let heading = g.phrase(words, true);
            let idx = items.len();
            items.push(Planned::Org {
                parent,
                level: *level,
                num: num.clone(),
                heading,
            });
            let path = parent_path.child(*level, num);
            for c in children {
                flatten(c, Some(idx), &path, title, next_section, g, items, plans);
            }
        }
        Skeleton::Sections(n) => {
            let parent = parent.expect("sections always sit under a title");
            let chapter_depth = parent_path.steps().iter().position(|(k, _)| *k == LevelKind::Chapter);
            let chapter = chapter_depth.map(|d| NodePath(parent_path.steps()[..=d].to_vec()));
            for _ in 0..*n {
                // gaps and lettered insertions mimic renumbering history
                let gap = if g.rng.gen_bool(0.1) { g.rng.gen_range(2..=4) } else { 1 };
                *next_section += gap;
                let number = if g.rng.gen_bool(0.04) && *next_section > 1 {
                    format!("{}{}", *next_section - 1, letters(g.rng.gen_range(0..3), false))
                } else {
                    next_section.to_string()
                };
                let path = parent_path.child(LevelKind::Section, &number);
                items.push(Planned::Section {
                    parent,
                    plan: plans.len(),
                });
                plans.push(SectionPlan {
                    title,
                    chapter: chapter.clone(),
                    path,
                    number,
                    segments: Vec::new(),
                });
            }
        }
    }
}

fn subdivision_suffix(rng: &mut ChaCha8Rng) -> String {
    let mut s = format!("({})", letters(rng.gen_range(0..6), false));
    if rng.gen_bool(0.5) {
        s.push_str(&format!("({})", rng.gen_range(1..6)));
    }
    s
}

pub fn generate_synthetic_with_truth(spec: &SyntheticSpec) -> Result<SyntheticCorpus, IngestError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vocab = vocabulary(&mut rng, spec.vocabulary_size as usize);
    let zipf = Zipf::new(u64::from(spec.vocabulary_size), spec.zipf_exponent)
        .map_err(|e| IngestError::InvalidSpec(e.to_string()))?;
    let mut g = Generator { spec, rng, vocab, zipf };

    let mut skeletons: Vec<Skeleton> = (0..spec.title_count as usize).map(|t| g.title_skeleton(t)).collect();
    if let Some(target) = spec.target_nodes {
        let (mut org, mut sections) = (0, 0);
        for s in &skeletons {
            census(s, &mut org, &mut sections);
        }
        let available = (f64::from(target) - 1.0 - org as f64).max(1.0);
        let factor = available / sections as f64;
        skeletons.iter_mut().for_each(|s| rescale(s, factor));
    }

    let mut items = Vec::new();
    let mut plans: Vec<SectionPlan> = Vec::new();
    let mut title_sections: Vec<Vec<usize>> = vec![Vec::new(); spec.title_count as usize];
    for (t, s) in skeletons.iter().enumerate() {
        let mut next_section = 0;
        let first = plans.len();
        flatten(
            s,
            None,
            &NodePath::default(),
            t,
            &mut next_section,
            &mut g,
            &mut items,
            &mut plans,
        );
        title_sections[t] = (first..plans.len()).collect();
    }

    let truth = plant_text(&mut g, &mut plans, &title_sections)?;
    let graph = assemble(&mut g, spec.snapshot_date, &items, &plans)?;
    Ok(SyntheticCorpus { graph, truth })
}

fn pick_target(g: &mut Generator<'_>, source: usize, total: usize, urn: &[usize]) -> Option<usize> {
    for _ in 0..16 {
        let t = if !urn.is_empty() && g.rng.gen_bool(g.spec.preferential_prob) {
            urn[g.rng.gen_range(0..urn.len())]
        } else {
            g.rng.gen_range(0..total)
        };
        if t != source {
            return Some(t);
        }
    }
    None
}

fn pick_in_title(g: &mut Generator<'_>, source: usize, pool: &[usize]) -> Option<usize> {
    for _ in 0..16 {
        let t = *pool.choose(&mut g.rng)?;
        if t != source {
            return Some(t);
        }
    }
    None
}

fn plant_text(
    g: &mut Generator<'_>,
    plans: &mut [SectionPlan],
    title_sections: &[Vec<usize>],
) -> Result<PlantedCitations, IngestError> {
    let mut truth = PlantedCitations::default();
    let mut urn: Vec<usize> = Vec::new();
    let total = plans.len();
    let geometric =
        Geometric::new(1.0 / (1.0 + g.spec.citations_mean)).map_err(|e| IngestError::InvalidSpec(e.to_string()))?;
    let lognormal = LogNormal::new(g.spec.words_log_mean, g.spec.words_log_sd)
        .map_err(|e| IngestError::InvalidSpec(e.to_string()))?;

    for s in 0..total {
        let events = geometric.sample(&mut g.rng) as usize;
        let mut phrases = Vec::with_capacity(events);
        for _ in 0..events {
            let roll: f64 = g.rng.gen();
            let source_title = plans[s].title;
            if roll < g.spec.self_reference_rate {
                phrases.push("this section".to_string());
                truth.self_references += 1;
                continue;
            }
            if roll < g.spec.self_reference_rate + g.spec.unresolved_rate {
                let missing = 900_000 + g.rng.gen_range(0..1000);
                phrases.push(format!("section {missing} of title {}", source_title + 1));
                truth.unresolved += 1;
                continue;
            }
            let Some(t) = pick_target(g, s, total, &urn) else {
                continue;
            };
            let target_title = plans[t].title;
            let title_num = target_title + 1;
            let same_title = target_title == source_title;
            let same_chapter = same_title && plans[s].chapter.is_some() && plans[s].chapter == plans[t].chapter;
            let mut targets = vec![t];
            let form = g.rng.gen_range(0..7);
            let phrase = match form {
                0 => format!("section {}{} of title {title_num}", plans[t].number, maybe_suffix(g)),
                1 => format!("{title_num} U.S.C. {}", plans[t].number),
                2 => format!("{title_num} U.S.C. § {}{}", plans[t].number, maybe_suffix(g)),
                3 if same_title => format!("section {} of this title", plans[t].number),
                4 if same_chapter => format!("section {} of this chapter", plans[t].number),
                5 => {
                    let extra = g.rng.gen_range(1..=2);
                    for _ in 0..extra {
                        if let Some(x) = pick_in_title(g, s, &title_sections[target_title]) {
                            targets.push(x);
                        }
                    }
                    let nums: Vec<&str> = targets.iter().map(|&x| plans[x].number.as_str()).collect();
                    if nums.len() == 1 {
                        format!("{title_num} U.S.C. § {}", nums[0])
                    } else if g.rng.gen_bool(0.5) {
                        format!("{title_num} U.S.C. §§ {}", nums.join(", "))
                    } else {
                        let (last, init) = nums.split_last().expect("at least two");
                        format!("§§ {}, and {last} of title {title_num}", init.join(", "))
                    }
                }
                6 => match pick_in_title(g, s, &title_sections[target_title]) {
                    Some(x) if x != t => {
                        let (lo, hi) = if x < t { (x, t) } else { (t, x) };
                        targets = vec![lo, hi];
                        format!(
                            "sections {} through {} of title {title_num}",
                            plans[lo].number, plans[hi].number
                        )
                    }
                    _ => format!("section {} of title {title_num}", plans[t].number),
                },
                _ => format!("{title_num} U.S.C. {}", plans[t].number),
            };
            for &x in &targets {
                truth.edges.push((plans[s].path.clone(), plans[x].path.clone()));
                urn.push(x);
            }
            phrases.push(phrase);
        }

        let words = (lognormal.sample(&mut g.rng).round() as usize).max(1);
        plans[s].segments = compose(g, words, phrases);
    }
    Ok(truth)
}

fn maybe_suffix(g: &mut Generator<'_>) -> String {
    if g.rng.gen_bool(0.4) {
        subdivision_suffix(&mut g.rng)
    } else {
        String::new()
    }
}

/// Interleaves pseudo-word sentences with citation phrases. Every phrase is
/// separated from its neighbours by at least one word.
fn compose(g: &mut Generator<'_>, words: usize, phrases: Vec<String>) -> Vec<String> {
    let mut slots: Vec<usize> = (0..phrases.len()).map(|_| g.rng.gen_range(0..words)).collect();
    slots.sort_unstable();
    let mut phrases = phrases.into_iter().zip(slots).peekable();
    let mut segments = Vec::with_capacity(words + 8);
    let mut sentence_left = 0;
    for i in 0..words {
        let start = sentence_left == 0;
        if start {
            sentence_left = g.rng.gen_range(8..=25);
        }
        let mut w = if start {
            capitalize(g.word())
        } else {
            g.word().to_string()
        };
        sentence_left -= 1;
        let end = sentence_left == 0 || i + 1 == words;
        if end {
            w.push('.');
            sentence_left = 0;
        } else if g.rng.gen_bool(0.08) {
            w.push(',');
        }
        segments.push(w);
        // a phrase may follow only a word that does not end its sentence
        while let Some((_, slot)) = phrases.peek() {
            if *slot != i || end {
                break;
            }
            let (phrase, _) = phrases.next().expect("peeked");
            segments.push(phrase);
            segments.push(g.word().to_string());
        }
    }
    // phrases whose slot fell on a sentence end go into a closing sentence
    let rest: Vec<String> = phrases.map(|(p, _)| p).collect();
    if !rest.is_empty() {
        for p in rest {
            segments.push(capitalize(g.word()));
            segments.push(p);
        }
        segments.push(format!("{}.", g.word()));
    }
    segments
}

struct Subdivision {
    level: LevelKind,
    num: String,
    heading: Option<String>,
    children: Vec<Subdivision>,
}

fn subdivisions(g: &mut Generator<'_>, depth: usize) -> Vec<Subdivision> {
    if depth >= g.spec.max_subdivision_depth as usize {
        return Vec::new();
    }
    let level = SUBDIVISIONS[depth];
    let n = g.rng.gen_range(2..=4);
    (0..n)
        .map(|i| {
            let heading = if depth == 0 && g.rng.gen_bool(0.3) {
                let words = g.rng.gen_range(1..=3);
                Some(g.phrase(words, false))
            } else {
                None
            };
            let children = if g.rng.gen_bool(0.3) {
                subdivisions(g, depth + 1)
            } else {
                Vec::new()
            };
            Subdivision {
                level,
                num: designation(level, i),
                heading,
                children,
            }
        })
        .collect()
}

fn count_subdivisions(subs: &[Subdivision]) -> usize {
    subs.iter().map(|s| 1 + count_subdivisions(&s.children)).sum()
}

fn add_subdivisions(
    b: &mut GraphBuilder,
    parent: NodeId,
    subs: &[Subdivision],
    chunks: &mut std::vec::IntoIter<String>,
) -> Result<(), IngestError> {
    for s in subs {
        let text = chunks.next().unwrap_or_default();
        let id = b.add_child(parent, s.level, s.num.clone(), s.heading.clone(), text)?;
        add_subdivisions(b, id, &s.children, chunks)?;
    }
    Ok(())
}

fn assemble(
    g: &mut Generator<'_>,
    date: NaiveDate,
    items: &[Planned],
    plans: &[SectionPlan],
) -> Result<CodeGraph, IngestError> {
    let mut b = GraphBuilder::new(date);
    let mut ids: Vec<NodeId> = Vec::with_capacity(items.len());
    for item in items {
        let id = match item {
            Planned::Org {
                parent,
                level,
                num,
                heading,
            } => {
                let parent = parent.map_or(b.root(), |p| ids[p]);
                b.add_child(parent, *level, num.clone(), Some(heading.clone()), "")?
            }
            Planned::Section { parent, plan } => {
                let plan = &plans[*plan];
                let heading_words = g.rng.gen_range(2..=5);
                let heading = g.phrase(heading_words, false);
                let subs = if g.rng.gen_bool(g.spec.subdivision_prob) {
                    subdivisions(g, 0)
                } else {
                    Vec::new()
                };
                let pieces = 1 + count_subdivisions(&subs);
                let chunks = split_segments(g, &plan.segments, pieces);
                let mut chunks = chunks.into_iter();
                let own = chunks.next().unwrap_or_default();
                let id = b.add_child(
                    ids[*parent],
                    LevelKind::Section,
                    plan.number.clone(),
                    Some(heading),
                    own,
                )?;
                add_subdivisions(&mut b, id, &subs, &mut chunks)?;
                id
            }
        };
        ids.push(id);
    }
    Ok(b.build())
}

/// Cuts the segment list into `pieces` contiguous, possibly empty, chunks.
fn split_segments(g: &mut Generator<'_>, segments: &[String], pieces: usize) -> Vec<String> {
    let mut cuts: Vec<usize> = (1..pieces).map(|_| g.rng.gen_range(0..=segments.len())).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(pieces);
    let mut start = 0;
    for cut in cuts.into_iter().chain(std::iter::once(segments.len())) {
        out.push(segments[start..cut].join(" "));
        start = cut;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::export_canonical;

    #[test]
    fn minimal_spec_gives_three_nodes() {
        let spec = SyntheticSpec {
            title_count: 1,
            max_depth: 0,
            sections_min: 1,
            sections_max: 1,
            subdivision_prob: 0.0,
            citations_mean: 0.0,
            ..SyntheticSpec::small(1)
        };
        let g = generate_synthetic(&spec).unwrap();
        assert_eq!(g.node_count(), 3);
        g.validate().unwrap();
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = export_canonical(&generate_synthetic(&SyntheticSpec::small(7)).unwrap());
        let b = export_canonical(&generate_synthetic(&SyntheticSpec::small(7)).unwrap());
        let c = export_canonical(&generate_synthetic(&SyntheticSpec::small(8)).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let bad = [
            SyntheticSpec {
                title_count: 0,
                ..SyntheticSpec::small(0)
            },
            SyntheticSpec {
                branching_min: 4,
                branching_max: 2,
                ..SyntheticSpec::small(0)
            },
            SyntheticSpec {
                subdivision_prob: 1.5,
                ..SyntheticSpec::small(0)
            },
            SyntheticSpec {
                max_depth: 6,
                ..SyntheticSpec::small(0)
            },
            SyntheticSpec {
                vocabulary_size: 3,
                ..SyntheticSpec::small(0)
            },
        ];
        for spec in bad {
            assert!(matches!(generate_synthetic(&spec), Err(IngestError::InvalidSpec(_))));
        }
    }

    #[test]
    fn designations() {
        assert_eq!(letters(0, false), "a");
        assert_eq!(letters(25, true), "Z");
        assert_eq!(letters(26, false), "aa");
        assert_eq!(roman(4), "iv");
        assert_eq!(roman(14), "xiv");
        assert_eq!(designation(LevelKind::Subchapter, 1), "II");
    }

    #[test]
    fn planted_paths_exist() {
        let corpus = generate_synthetic_with_truth(&SyntheticSpec::small(3)).unwrap();
        assert!(!corpus.truth.edges.is_empty());
        for (s, t) in &corpus.truth.edges {
            assert!(corpus.graph.lookup(s).is_some(), "{s}");
            assert!(corpus.graph.lookup(t).is_some(), "{t}");
            assert_ne!(s, t);
        }
    }

    #[test]
    fn vocabulary_avoids_grammar_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = vocabulary(&mut rng, 500);
        assert_eq!(v.len(), 500);
        assert!(v
            .iter()
            .all(|w| !RESERVED.contains(&w.as_str()) && w.chars().all(|c| c.is_ascii_lowercase())));
    }
}
