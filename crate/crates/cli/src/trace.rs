//! Text dump of the intermediate structures of the fast pipeline.

use std::fmt::Write as _;

use eqtree::continuation::{
    build_zpc, chain_for, compute_follow_all, materialize, ContKey, FirstSet, ZpcStructure,
};
use eqtree::syntax::{linearize, NodeId, NodeKind, RankedAlphabet, RegExpr};
use eqtree::worddfa::{pseudo_continuation, psi_encoding, similarity_e, PsiWord};
use eqtree::Result;

fn node_name(zpc: &ZpcStructure, alphabet: &RankedAlphabet, v: NodeId) -> String {
    let kind = match zpc.tree().kind(v) {
        NodeKind::Const(c) => alphabet.name(c).to_string(),
        NodeKind::Apply(l) => alphabet.label_name(l),
        NodeKind::Sum => "+".into(),
        NodeKind::Product(c) => format!(".{}", alphabet.name(c)),
        NodeKind::Star(c) => format!("*{}", alphabet.name(c)),
    };
    format!("{v}:{kind}")
}

fn set_text(set: &FirstSet, alphabet: &RankedAlphabet) -> String {
    let items: Vec<String> = set.iter().map(|x| x.name(alphabet)).collect();
    format!("{{{}}}", items.join(", "))
}

/// Sections: gamma, continuations, follow, psi, words, classes. Each starts
/// with a `== name` line.
pub fn trace(expr: &RegExpr, alphabet: &RankedAlphabet) -> Result<String> {
    let lin = linearize(expr);
    let zpc = build_zpc(&lin);
    let tree = zpc.tree();
    let mut out = String::new();

    let _ = writeln!(out, "== gamma");
    for v in 0..tree.len() {
        if let Some(g) = zpc.gamma(v) {
            let _ = writeln!(
                out,
                "{} -> {}",
                node_name(&zpc, alphabet, v),
                node_name(&zpc, alphabet, g)
            );
        }
    }

    let keys: Vec<ContKey> = zpc
        .keys()
        .into_iter()
        .filter(|k| *k != ContKey::Epsilon)
        .collect();
    let _ = writeln!(out, "== continuations");
    for &key in &keys {
        let chain = chain_for(&zpc, key)?;
        let _ = writeln!(
            out,
            "{} = {}",
            key.name(alphabet),
            materialize(&zpc, &chain).render(alphabet)
        );
    }

    let sets = compute_follow_all(&zpc);
    let _ = writeln!(out, "== follow");
    let _ = writeln!(out, "first = {}", set_text(&sets.first, alphabet));
    let mut rows: Vec<_> = sets.follow.iter().collect();
    rows.sort_by_key(|((p, k), _)| (p.index, *k));
    for ((p, k), set) in rows {
        let _ = writeln!(
            out,
            "{} = {}",
            ContKey::Child(*p, *k).name(alphabet),
            set_text(set, alphabet)
        );
    }

    let psi = psi_encoding(tree)?;
    let _ = writeln!(out, "== psi");
    for id in 1..=psi.count() {
        let v = (0..tree.len())
            .find(|&v| psi.of(v) == id)
            .expect("every id is used");
        let _ = writeln!(out, "{id} = {}", tree.subexpr(v).project().render(alphabet));
    }

    let _ = writeln!(out, "== words");
    for &key in &keys {
        let word = pseudo_continuation(&zpc, &psi, key)?;
        let _ = writeln!(out, "{} = {}", key.name(alphabet), PsiWord(&word, alphabet));
    }

    let _ = writeln!(out, "== classes");
    for group in similarity_e(&zpc, &psi)?.groups() {
        let names: Vec<String> = group.iter().map(|k| k.name(alphabet)).collect();
        let _ = writeln!(out, "{{{}}}", names.join(", "));
    }
    Ok(out)
}
