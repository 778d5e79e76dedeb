//! Verification suite: re-checks the structural facts about `A_X` and its
//! group at a configurable scale and assembles a deterministic JSON report.
//!
//! Where a commonly quoted form of an identity is false in general, the
//! check verifies the correct form and records whether the quoted form holds
//! (`stated_form_holds`) together with a replayable counterexample.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::FiniteAbelianGroup;
use crate::complex::SquareComplex;
use crate::constructions::{extended_automaton, AbelianAutomaton};
use crate::lamplighter::{lamplighter_to_word, word_to_lamplighter, LamplighterElement};
use crate::mealy::{
    is_constant_translation, is_identity, words_equal, Generator, GroupWord, MealyAutomaton,
    MealyError,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const SEED_ENV: &str = "LAMPGROUP_SEED";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub depth: usize,
    pub word_len: usize,
    pub samples: usize,
    pub roundtrips: usize,
    pub seed: u64,
    /// Adds wall times to the report; off by default so that reports are
    /// byte-identical across runs.
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            depth: 3,
            word_len: 6,
            samples: 500,
            roundtrips: 200,
            seed: DEFAULT_SEED,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub params: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl CheckRecord {
    fn new(name: &str, params: Value) -> Self {
        CheckRecord {
            name: name.to_string(),
            params,
            pass: true,
            witness: None,
            counterexample: None,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    /// Marks failure, keeping the first counterexample.
    fn fail(&mut self, counterexample: Value) {
        self.pass = false;
        self.counterexample.get_or_insert(counterexample);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub group: String,
    pub order: usize,
    pub params: SuiteParams,
    pub checks: Vec<CheckRecord>,
    pub verdict: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Size of the orbit of `0^m` under the states of `a` and their inverses.
pub fn orbit_on_level(a: &MealyAutomaton, m: usize) -> Result<usize, MealyError> {
    a.orbit_size(&vec![0; m])
}

/// Number of behaviorally distinct positive words of length `1..=max_len`.
pub fn free_semigroup_census(ax: &AbelianAutomaton, max_len: usize) -> Result<usize, MealyError> {
    let n = ax.order();
    let mut words: Vec<Vec<Generator>> = Vec::new();
    let mut layer: Vec<Vec<Generator>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |q| {
                    let mut v = w.clone();
                    v.push(Generator::pos(q));
                    v
                })
            })
            .collect();
        words.extend(layer.iter().cloned());
    }
    count_classes(ax, words, 2)
}

/// Counts behavior classes, comparing only words with equal signatures.
fn count_classes(
    ax: &AbelianAutomaton,
    words: Vec<Vec<Generator>>,
    sig_len: usize,
) -> Result<usize, MealyError> {
    let mut buckets: BTreeMap<Vec<usize>, Vec<GroupWord<'_>>> = BTreeMap::new();
    for w in words {
        let w = ax.word(w);
        buckets.entry(signature(&w, sig_len)).or_default().push(w);
    }
    let mut classes = 0;
    for bucket in buckets.values() {
        let mut reps: Vec<&GroupWord<'_>> = Vec::new();
        for w in bucket {
            let mut known = false;
            for r in &reps {
                if words_equal(w, r)? {
                    known = true;
                    break;
                }
            }
            if !known {
                reps.push(w);
            }
        }
        classes += reps.len();
    }
    Ok(classes)
}

/// Images of all words of the given length, concatenated.
pub fn signature(w: &GroupWord<'_>, len: usize) -> Vec<usize> {
    let n = w.automaton().alphabet_size();
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total * len);
    for idx in 0..total {
        let mut x = vec![0; len];
        let mut r = idx;
        for slot in x.iter_mut().rev() {
            *slot = r % n;
            r /= n;
        }
        out.extend(w.act(&x).expect("letters in range"));
    }
    out
}

/// A uniformly random signed word of length `0..=max_len`.
pub fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R, max_len: usize) -> Vec<Generator> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let q = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                Generator::neg(q)
            } else {
                Generator::pos(q)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub u: String,
    pub v: String,
    pub words_equal: bool,
    pub image_u: LamplighterElement,
    pub image_v: LamplighterElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialOutcome {
    pub pairs: usize,
    pub equal_pairs: usize,
    pub discrepancies: Vec<Discrepancy>,
    pub roundtrips: usize,
    pub roundtrip_failures: Vec<LamplighterElement>,
}

/// Compares `words_equal(u, v)` with equality of lamplighter images on
/// random pairs of words of length `<= word_len`.
///
/// Independent random pairs are almost never equal, so the pairs are drawn
/// from a pool of random words in three equal strata: independent pairs,
/// pairs with equal lamplighter images, and pairs with equal action on the
/// third level. Round trips use random elements with lamps in `[-3, 3]` and
/// shift in `[-3, 3]`.
pub fn lamplighter_differential(
    ax: &AbelianAutomaton,
    pairs: usize,
    word_len: usize,
    roundtrips: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DifferentialOutcome, MealyError> {
    let g = ax.group();
    let n = ax.order();
    let pool: Vec<GroupWord<'_>> = (0..(4 * pairs).max(1))
        .map(|_| ax.word(random_word(n, rng, word_len)))
        .collect();
    let images: Vec<LamplighterElement> = pool
        .iter()
        .map(|w| word_to_lamplighter(g, w).expect("word over A_X"))
        .collect();
    let mut by_image: BTreeMap<&LamplighterElement, Vec<usize>> = BTreeMap::new();
    let mut by_sig: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, w) in pool.iter().enumerate() {
        by_image.entry(&images[k]).or_default().push(k);
        by_sig.entry(signature(w, 3)).or_default().push(k);
    }
    let sigs: Vec<Vec<usize>> = pool.iter().map(|w| signature(w, 3)).collect();
    let partner = |rng: &mut ChaCha8Rng, u: usize, bucket: &[usize]| {
        let others: Vec<usize> = bucket.iter().copied().filter(|&k| k != u).collect();
        if others.is_empty() {
            rng.gen_range(0..pool.len())
        } else {
            others[rng.gen_range(0..others.len())]
        }
    };
    let mut out = DifferentialOutcome {
        pairs,
        equal_pairs: 0,
        discrepancies: Vec::new(),
        roundtrips,
        roundtrip_failures: Vec::new(),
    };
    for k in 0..pairs {
        let u = rng.gen_range(0..pool.len());
        let v = match k % 3 {
            0 => rng.gen_range(0..pool.len()),
            1 => partner(rng, u, &by_image[&images[u]]),
            _ => partner(rng, u, &by_sig[&sigs[u]]),
        };
        let eq = words_equal(&pool[u], &pool[v])?;
        out.equal_pairs += eq as usize;
        if eq != (images[u] == images[v]) {
            out.discrepancies.push(Discrepancy {
                u: pool[u].display(),
                v: pool[v].display(),
                words_equal: eq,
                image_u: images[u].clone(),
                image_v: images[v].clone(),
            });
        }
    }
    for _ in 0..roundtrips {
        let p = LamplighterElement::random(g, rng, 3, 3);
        let w = lamplighter_to_word(ax, &p).expect("element of g");
        let back = word_to_lamplighter(g, &w).expect("word over A_X");
        let w2 = lamplighter_to_word(ax, &back).expect("element of g");
        if back != p || !words_equal(&w, &w2)? {
            out.roundtrip_failures.push(p);
        }
    }
    Ok(out)
}

fn word_json(w: &GroupWord<'_>) -> Value {
    Value::String(w.display())
}

struct Ctx<'a> {
    ax: &'a AbelianAutomaton,
    g: &'a FiniteAbelianGroup,
    n: usize,
    params: &'a SuiteParams,
}

impl Ctx<'_> {
    fn l(&self, i: usize) -> String {
        self.g.label(i)
    }

    fn twice_is_zero(&self, i: usize) -> bool {
        self.g.add_idx(i, i) == 0
    }

    fn times(&self, k: usize, i: usize) -> usize {
        (0..k).fold(0, |acc, _| self.g.add_idx(acc, i))
    }
}

type CheckFn = fn(&Ctx<'_>, &mut CheckRecord) -> Result<(), MealyError>;

/// Runs every check in order; a failing check does not stop the suite.
pub fn verify_suite(g: &FiniteAbelianGroup, params: &SuiteParams) -> VerificationReport {
    let ax = AbelianAutomaton::new(g.clone());
    let ctx = Ctx {
        ax: &ax,
        g,
        n: g.order(),
        params,
    };
    let checks: [(&str, Value, CheckFn); 12] = [
        ("parity", json!({}), check_parity),
        ("self_duality", json!({}), check_self_duality),
        ("translation_identities", json!({}), check_translation_identities),
        ("level_transitivity", json!({ "max_level": params.depth }), check_level_transitivity),
        (
            "dual_level_transitivity",
            json!({ "max_level": params.depth }),
            check_dual_level_transitivity,
        ),
        (
            "stabilizer_sections",
            json!({ "suffix_len": params.depth.min(3) }),
            check_stabilizer,
        ),
        ("section_at_zeros", json!({ "max_k": 5 }), check_section_at_zeros),
        ("free_semigroup", json!({ "max_len": census_len(g.order()) }), check_free_semigroup),
        ("pi_closure", json!({}), check_pi_closure),
        (
            "lamplighter_differential",
            json!({
                "pairs": params.samples,
                "word_len": params.word_len,
                "roundtrips": params.roundtrips,
                "seed": params.seed,
            }),
            check_lamplighter,
        ),
        ("regular_roots", json!({}), check_regular_roots),
        ("a0_infinite_order", json!({ "max_power": 20 }), check_a0_order),
    ];
    let mut records = Vec::with_capacity(checks.len());
    for (name, p, f) in checks {
        let mut rec = CheckRecord::new(name, p);
        let start = Instant::now();
        if let Err(e) = f(&ctx, &mut rec) {
            rec.pass = false;
            rec.notes.push(e.to_string());
        }
        if params.timings {
            rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        records.push(rec);
    }
    let verdict = records.iter().all(|r| r.pass);
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        group: g.spec_string(),
        order: g.order(),
        params: params.clone(),
        checks: records,
        verdict,
    }
}

/// Longest word length for the census with at most 1000 words.
pub fn census_len(n: usize) -> usize {
    let mut total = 0;
    let mut len = 0;
    while len < 4 {
        let next = total + n.pow(len as u32 + 1);
        if next > 1000 {
            break;
        }
        total = next;
        len += 1;
    }
    len.max(1)
}

fn check_parity(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let a = c.ax.automaton();
    let odd = c.n % 2 == 1;
    let reversible = a.is_reversible();
    let bireversible = a.is_bireversible();
    let (complete, status) = SquareComplex::from_automaton(a).is_complete();
    let roots = c.g.all_elements_have_square_roots();
    rec.witness = Some(json!({
        "odd_order": odd,
        "reversible": reversible,
        "bireversible": bireversible,
        "complete": complete,
        "square_roots": roots,
    }));
    if !(reversible && bireversible == odd && complete == odd && roots == odd) {
        let defects: Vec<Value> = status
            .defects()
            .into_iter()
            .take(4)
            .map(|(corner, k)| json!({ "corner": corner, "count": k }))
            .collect();
        rec.fail(json!({ "link_defects": defects }));
    }
    Ok(())
}

fn check_self_duality(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    match c.ax.check_self_duality() {
        Ok(iso) => {
            rec.witness = Some(json!({
                "phi": iso.phi.iter().map(|&i| c.l(i)).collect::<Vec<_>>(),
                "psi": iso.psi.iter().map(|&i| c.ax.automaton().state_labels()[i].clone()).collect::<Vec<_>>(),
            }));
        }
        Err(e) => rec.fail(json!({ "i": e.i, "j": e.j })),
    }
    if c.ax.automaton().isomorphic(&c.ax.automaton().dual()).is_none() {
        rec.fail(json!("generic isomorphism search found nothing"));
    }
    Ok(())
}

fn check_translation_identities(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let ax = c.ax;
    let ext = extended_automaton(c.g);
    let mut rigid_holds = true;
    for i in 0..c.n {
        let sigma = ax.rigid_translation(i);
        if sigma.root_permutation().0 != (0..c.n).map(|x| c.g.add_idx(x, i)).collect::<Vec<_>>() {
            rec.fail(json!({ "identity": "root of a0 a_{-i}^-1 is x+i", "i": c.l(i) }));
        }
        // Compare with the rigid translation inside the extended automaton.
        let w = GroupWord::new(&ext, vec![Generator::pos(0), Generator::neg(c.g.neg_idx(i))])?;
        let t = GroupWord::new(&ext, vec![Generator::pos(2 * c.n + i)])?;
        let rigid = words_equal(&w, &t)?;
        if rigid != c.twice_is_zero(i) {
            rec.fail(json!({ "identity": "a0 a_{-i}^-1 rigid iff 2i = 0", "i": c.l(i) }));
        }
        if !rigid && rigid_holds {
            rigid_holds = false;
            rec.notes.push(format!(
                "a0 a_{{-i}}^-1 is the rigid translation only when 2i = 0; fails at i = {}",
                c.l(i)
            ));
        }
        let ci = ax.lamp_generator_c(i);
        if is_constant_translation(&ci, c.g)? != Some(i) {
            rec.fail(json!({ "identity": "c_i is the constant translation by i", "i": c.l(i) }));
        }
        for j in 0..c.n {
            let lhs = &sigma * &ax.a(j);
            if !words_equal(&lhs, &ax.a(c.g.add_idx(i, j)))? {
                rec.fail(json!({ "identity": "sigma_i a_j = a_{i+j}", "i": c.l(i), "j": c.l(j) }));
            }
            let lhs = &ax.a_inv(i) * &ax.a(j);
            if !words_equal(&lhs, &ax.lamp_generator_c(c.g.sub_idx(j, i)))? {
                rec.fail(json!({ "identity": "a_i^-1 a_j = c_{j-i}", "i": c.l(i), "j": c.l(j) }));
            }
            let lhs = &sigma * &ax.rigid_translation(j);
            if !words_equal(&lhs, &ax.rigid_translation(c.g.add_idx(i, j)))? {
                rec.fail(json!({ "identity": "sigma_i sigma_j = sigma_{i+j}", "i": c.l(i), "j": c.l(j) }));
            }
            if !words_equal(&ax.a(j), &(&ax.a(0) * &ax.lamp_generator_c(j)))? {
                rec.fail(json!({ "identity": "a_j = a_0 c_j", "j": c.l(j) }));
            }
        }
    }
    rec.witness = Some(json!({ "stated_form_holds": rigid_holds }));
    Ok(())
}

fn check_level_transitivity(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    level_transitivity(c.ax.automaton(), c.params.depth, rec)
}

fn check_dual_level_transitivity(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    level_transitivity(&c.ax.automaton().dual(), c.params.depth, rec)
}

fn level_transitivity(a: &MealyAutomaton, depth: usize, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let mut sizes = Vec::new();
    for m in 0..=depth {
        let size = orbit_on_level(a, m)?;
        let expect = a.alphabet_size().pow(m as u32);
        if size != expect {
            rec.fail(json!({ "level": m, "orbit": size, "expected": expect }));
        }
        sizes.push(size);
    }
    rec.witness = Some(json!({ "orbit_sizes": sizes }));
    Ok(())
}

fn check_stabilizer(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let ax = c.ax;
    for k in 0..c.n {
        let b = ax.first_level_stabilizer_b(k);
        if !b.root_permutation().is_identity() {
            rec.fail(json!({ "property": "b_k fixes every letter", "k": c.l(k) }));
        }
        for x in 0..c.n {
            let plain = words_equal(&b.section(x)?, &ax.a(c.g.sub_idx(k, x)))?;
            if plain != c.twice_is_zero(k) {
                rec.fail(json!({
                    "property": "section of b_k at x is a_{k-x} iff 2k = 0",
                    "k": c.l(k),
                    "x": c.l(x),
                }));
            }
        }
    }
    if !words_equal(&ax.first_level_stabilizer_b(0), &ax.a(0))? {
        rec.fail(json!({ "property": "b_0 = a_0" }));
    }
    // The embedding a_j -> b_{i+j} on the subtree below i.
    let suffix_len = c.params.depth.min(3);
    let mut stated = None;
    'outer: for i in 0..c.n {
        for j in 0..c.n {
            let b = ax.first_level_stabilizer_b(c.g.add_idx(i, j));
            let a = ax.a(j);
            for len in 0..=suffix_len {
                for w in all_words(c.n, len) {
                    let mut iw = vec![i];
                    iw.extend(&w);
                    let mut rhs = vec![i];
                    rhs.extend(a.act(&w)?);
                    if b.act(&iw)? != rhs {
                        stated = Some(json!({ "i": c.l(i), "j": c.l(j), "w": w }));
                        break 'outer;
                    }
                }
            }
        }
    }
    rec.witness = Some(json!({ "stated_form_holds": stated.is_none(), "stated_form_counterexample": stated }));
    if stated.is_some() {
        rec.notes.push("act(b_{i+j}, i w) = i act(a_j, w) fails unless 2(i+j) = 0".to_string());
    }
    Ok(())
}

fn all_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn check_section_at_zeros(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let ax = c.ax;
    let mut stated = None;
    for i in 0..c.n {
        for j in 0..c.n {
            let p = &ax.a(i) * &ax.a(j);
            for k in 0..=5 {
                let s = p.section_at(&vec![0; k])?;
                let correct = &ax.a(i) * &ax.a(c.g.sub_idx(j, c.times(k, i)));
                if !words_equal(&s, &correct)? {
                    rec.fail(json!({ "i": c.l(i), "j": c.l(j), "k": k, "section": word_json(&s) }));
                }
                let quoted = &ax.a(i) * &ax.a(c.g.add_idx(j, c.times(k, i)));
                if stated.is_none() && !words_equal(&s, &quoted)? {
                    stated = Some(json!({ "i": c.l(i), "j": c.l(j), "k": k, "section": word_json(&s) }));
                }
            }
        }
    }
    rec.witness = Some(json!({
        "form": "a_i a_{j-ki}",
        "stated_form_holds": stated.is_none(),
        "stated_form_counterexample": stated,
    }));
    if stated.is_some() {
        rec.notes.push("the form a_i a_{j+ki} holds only when 2i = 0".to_string());
    }
    Ok(())
}

fn check_free_semigroup(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let len = census_len(c.n);
    let classes = free_semigroup_census(c.ax, len)?;
    let expect: usize = (1..=len).map(|l| c.n.pow(l as u32)).sum();
    rec.witness = Some(json!({ "classes": classes, "words": expect }));
    if classes != expect {
        rec.fail(json!({ "classes": classes, "expected": expect }));
    }
    Ok(())
}

fn check_pi_closure(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let ax = c.ax;
    let mut tested = 0;
    for i in 0..c.n {
        for j in 0..c.n {
            for k in 0..c.n {
                let ck = ax.lamp_generator_c(k);
                for w in [
                    &(&ax.a_inv(i) * &ck) * &ax.a(j),
                    &(&ax.a(i) * &ck) * &ax.a_inv(j),
                ] {
                    tested += 1;
                    if is_constant_translation(&w, c.g)?.is_none() {
                        rec.fail(json!({ "word": word_json(&w) }));
                    }
                }
            }
        }
    }
    rec.witness = Some(json!({ "words": tested }));
    Ok(())
}

fn check_lamplighter(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.params.seed);
    let out = lamplighter_differential(c.ax, c.params.samples, c.params.word_len, c.params.roundtrips, &mut rng)?;
    rec.witness = Some(json!({
        "pairs": out.pairs,
        "equal_pairs": out.equal_pairs,
        "discrepancies": out.discrepancies.len(),
        "roundtrips": out.roundtrips,
        "roundtrip_failures": out.roundtrip_failures.len(),
    }));
    if let Some(d) = out.discrepancies.first() {
        rec.fail(serde_json::to_value(d).expect("plain data"));
    }
    if let Some(p) = out.roundtrip_failures.first() {
        rec.fail(json!({ "roundtrip": p }));
    }
    Ok(())
}

fn check_regular_roots(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    for i in 0..c.n {
        let expect: Vec<usize> = (0..c.n).map(|x| c.g.add_idx(x, i)).collect();
        if c.ax.a(i).root_permutation().0 != expect {
            rec.fail(json!({ "state": c.ax.automaton().state_labels()[i] }));
        }
    }
    Ok(())
}

fn check_a0_order(c: &Ctx<'_>, rec: &mut CheckRecord) -> Result<(), MealyError> {
    for k in 1..=20 {
        if is_identity(&c.ax.a(0).pow(k))? {
            rec.fail(json!({ "power": k }));
        }
    }
    Ok(())
}
