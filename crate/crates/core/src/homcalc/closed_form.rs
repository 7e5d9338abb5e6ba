//! Closed-form endomorphism algebras of the collection's generating object.
//!
//! For `n = 2m` the parity-0 part is `S/(x2, x4, .., x_{2m}, x1^{a1}, x3^{a3}, ..)`
//! and the parity-1 part vanishes. For `n = 2m + 1` the parity-0 part is
//! `S/(x1, x3, .., x_{2m+1}, x2^{a2}, x4^{a4}, ..)` and the parity-1 part is a
//! free module of rank one over it, generated in degree `-x1`.

use std::collections::BTreeMap;

use crate::chain::{Degree, GradingGroup};

/// Exponent vectors spanning the parity-0 algebra.
pub fn closed_form_monomials(g: &GradingGroup) -> Vec<Vec<u32>> {
    let n = g.n();
    let chain = g.chain();
    // 0-based indices of the surviving variables.
    let live: Vec<usize> = if n % 2 == 0 { (0..n).step_by(2).collect() } else { (1..n).step_by(2).collect() };
    let mut out = vec![vec![0u32; n]];
    for &v in &live {
        let a = chain.a(v) as u32;
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..a).map(move |e| {
                    let mut m2 = m.clone();
                    m2[v] = e;
                    m2
                })
            })
            .collect();
    }
    out
}

/// Degree -> dimension of `Hom(E, T^parity E (l))` predicted by the closed form.
pub fn closed_form_hom(g: &GradingGroup, parity: u8) -> BTreeMap<Degree, usize> {
    let mut out = BTreeMap::new();
    if parity % 2 == 1 && g.n() % 2 == 0 {
        return out;
    }
    let offset = if parity % 2 == 1 { g.neg(&g.x(0)) } else { g.zero() };
    for m in closed_form_monomials(g) {
        let d = g.add(&g.monomial_degree(&m), &offset);
        *out.entry(d).or_insert(0) += 1;
    }
    out
}
