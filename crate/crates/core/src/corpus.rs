//! Seeded random expressions and the scaling families used by benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::syntax::{Label, RankedAlphabet, RegExpr, Symbol};

pub const CORPUS_ALPHABET: &str = "a/0 b/0 c/0 g/1 f/2 h/2";
pub const CORPUS_SEED: u64 = 20_240_601;
pub const CORPUS_SIZE: usize = 100;
pub const CORPUS_MAX_NODES: usize = 40;

pub fn corpus_alphabet() -> RankedAlphabet {
    RankedAlphabet::parse(CORPUS_ALPHABET).expect("valid alphabet")
}

/// `count` random expressions over `alphabet`, each with at most
/// `max_nodes` nodes. The same seed always gives the same list.
pub fn random_corpus(
    alphabet: &RankedAlphabet,
    seed: u64,
    count: usize,
    max_nodes: usize,
) -> Vec<RegExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let budget = rng.gen_range(1..=max_nodes.max(1));
            random_expression(&mut rng, alphabet, budget)
        })
        .collect()
}

/// The acceptance corpus: 100 expressions of at most 40 nodes.
pub fn default_corpus() -> (RankedAlphabet, Vec<RegExpr>) {
    let s = corpus_alphabet();
    let exprs = random_corpus(&s, CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_NODES);
    (s, exprs)
}

/// A random expression with at most `budget` nodes. Needs at least one
/// constant in `alphabet`.
pub fn random_expression(rng: &mut impl Rng, alphabet: &RankedAlphabet, budget: usize) -> RegExpr {
    let constants: Vec<Symbol> = alphabet.constants().collect();
    let applied: Vec<Symbol> = alphabet
        .symbols()
        .filter(|&s| !alphabet.is_constant(s))
        .collect();
    gen(rng, alphabet, &constants, &applied, budget.max(1))
}

fn gen(
    rng: &mut impl Rng,
    sigma: &RankedAlphabet,
    constants: &[Symbol],
    applied: &[Symbol],
    budget: usize,
) -> RegExpr {
    let pick_const = |rng: &mut dyn rand::RngCore| constants[rng.gen_range(0..constants.len())];
    if budget == 1 {
        return RegExpr::constant(pick_const(rng));
    }
    let fitting: Vec<Symbol> = applied
        .iter()
        .copied()
        .filter(|&f| sigma.arity(f) < budget)
        .collect();
    // 0: constant, 1: application, 2: sum, 3: product, 4: star.
    let weights = [
        1,
        if fitting.is_empty() { 0 } else { 4 },
        if budget >= 3 { 2 } else { 0 },
        if budget >= 3 { 3 } else { 0 },
        2,
    ];
    let total: u32 = weights.iter().sum();
    let mut roll = rng.gen_range(0..total);
    let choice = weights
        .iter()
        .position(|&w| {
            if roll < w {
                true
            } else {
                roll -= w;
                false
            }
        })
        .unwrap();
    let rest = budget - 1;
    match choice {
        0 => RegExpr::constant(pick_const(rng)),
        1 => {
            let f = fitting[rng.gen_range(0..fitting.len())];
            let shares = split(rng, rest, sigma.arity(f));
            RegExpr::apply(
                Label::plain(f),
                shares
                    .into_iter()
                    .map(|b| gen(rng, sigma, constants, applied, b))
                    .collect(),
            )
        }
        2 | 3 => {
            let shares = split(rng, rest, 2);
            let l = gen(rng, sigma, constants, applied, shares[0]);
            let r = gen(rng, sigma, constants, applied, shares[1]);
            if choice == 2 {
                RegExpr::sum(l, r)
            } else {
                RegExpr::product(l, r, pick_const(rng))
            }
        }
        _ => RegExpr::star(gen(rng, sigma, constants, applied, rest), pick_const(rng)),
    }
}

/// Splits `total` into `parts` random shares, each at least 1.
fn split(rng: &mut impl Rng, total: usize, parts: usize) -> Vec<usize> {
    let mut shares = vec![1; parts];
    for _ in 0..total - parts {
        shares[rng.gen_range(0..parts)] += 1;
    }
    shares
}

/// Generated expression families for scaling runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// F₀ = c, F_{i+1} = (F_i ·c g(c))*c.
    NestedStar,
    /// f(a,a) + … + f(a,a).
    WideSum,
    /// g(c) ·c g(c) ·c … ·c g(c), nested to the left.
    DeepProduct,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::NestedStar, Family::WideSum, Family::DeepProduct];

    pub fn name(self) -> &'static str {
        match self {
            Family::NestedStar => "nested-star",
            Family::WideSum => "wide-sum",
            Family::DeepProduct => "deep-product",
        }
    }

    pub fn parse(text: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == text)
            .ok_or_else(|| Error::Format(format!("unknown family `{text}`")))
    }

    pub fn alphabet(self) -> RankedAlphabet {
        corpus_alphabet()
    }

    /// The largest member with at most `nodes` nodes (never below the
    /// smallest member).
    pub fn generate(self, alphabet: &RankedAlphabet, nodes: usize) -> RegExpr {
        let sym = |n: &str| alphabet.lookup(n).expect("family symbol");
        let (a, c) = (sym("a"), sym("c"));
        let gc = || RegExpr::apply(Label::plain(sym("g")), vec![RegExpr::constant(c)]);
        match self {
            Family::NestedStar => {
                let mut e = RegExpr::constant(c);
                while e.size() + 4 <= nodes {
                    e = RegExpr::star(RegExpr::product(e, gc(), c), c);
                }
                e
            }
            Family::WideSum => {
                let faa = || {
                    RegExpr::apply(
                        Label::plain(sym("f")),
                        vec![RegExpr::constant(a), RegExpr::constant(a)],
                    )
                };
                let mut e = faa();
                while e.size() + 4 <= nodes {
                    e = RegExpr::sum(e, faa());
                }
                e
            }
            Family::DeepProduct => {
                let mut e = gc();
                while e.size() + 3 <= nodes {
                    e = RegExpr::product(e, gc(), c);
                }
                e
            }
        }
    }
}
