//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use chainfact::chain::{numerics, transpose, ChainPolynomial, Degree, GradingGroup};
use chainfact::exactmath::{
    charpoly_division_free, det_one_minus_t, det_one_minus_t_of_power, smith_normal_form, IntMatrix, Poly,
};
use chainfact::homcalc::{degree_weight_bounds, degrees_in_weight_range, hom_dim, serre_symmetry_check, HomTable};
use chainfact::invariants::{chi, chi_from_phi, companion, lattice_check, monodromy_oracle, phi};
use chainfact::mf::{MatrixFactorization, Ring};
use chainfact::verify::{build_collection, verify_triangles, Status};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let ms = start.elapsed().as_millis();
    match &outcome {
        Ok(d) => println!("criterion {n} PASS [{ms} ms] {title}: {d}"),
        Err(d) => println!("criterion {n} FAIL [{ms} ms] {title}: {d}"),
    }
    outcome.is_ok()
}

const MAIN_CHAINS: [&str; 9] = ["2", "3", "4", "2,2", "2,3", "3,2", "3,3", "2,2,2", "2,2,3"];

/// `prod_{i=0}^n (1 - t^{d_i/e_i})^{(-1)^{n-i} e_i}` with `e_i = gcd(d_i, mu)`.
fn e_product(f: &ChainPolynomial) -> Poly {
    let num = numerics(f);
    let mu = num.mu_n();
    let n = f.n();
    let (mut top, mut bottom) = (Poly::one(), Poly::one());
    for (i, &d) in num.d.iter().enumerate() {
        let e = d.gcd(&mu);
        let factor = Poly::one_minus_t_pow((d / e) as usize).pow(e as u32);
        if (n - i) % 2 == 0 {
            top = &top * &factor;
        } else {
            bottom = &bottom * &factor;
        }
    }
    top.div_exact(&bottom).expect("the product is a polynomial")
}

fn criterion_1() -> Outcome {
    let chains = ChainPolynomial::enumerate(4, 5);
    let mut largest = 0;
    let mut direct = 0;
    for f in &chains {
        let n = f.n();
        let mu = numerics(f).mu_n() as usize;
        largest = largest.max(mu);
        let z = phi(f).map_err(|e| format!("{f}: {e}"))?;
        ensure(z.phi.degree() == Some(mu), || format!("{f}: deg phi != mu"))?;
        let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        for i in 0..=mu {
            ensure(z.coeffs[mu - i] == &sign * &z.coeffs[i], || format!("{f}: palindrome fails at {i}"))?;
        }
        let ch = chi_from_phi(&z).map_err(|e| format!("{f}: {e}"))?;
        ensure(ch.chi.det().unwrap().is_one(), || format!("{f}: det chi != 1"))?;
        let m1 = companion(&z).map_err(|e| format!("{f}: {e}"))?;
        ensure(det_one_minus_t(&m1).unwrap() == z.phi, || format!("{f}: det(1 - tM1) != phi"))?;
        let mut m = ch.chi.inverse_unitriangular().unwrap().mul(&ch.chi.transpose()).unwrap();
        if n % 2 == 1 {
            m = m.neg();
        }
        ensure(m1.pow_sparse(mu as u64).unwrap() == m, || format!("{f}: M1^mu != (-1)^n chi^-1 chi^T"))?;
        let big_phi = det_one_minus_t_of_power(&z.phi, mu, mu).unwrap();
        if mu <= 64 {
            direct += 1;
            ensure(det_one_minus_t(&m).unwrap() == big_phi, || format!("{f}: direct det(1 - tM) differs"))?;
        }
        ensure(big_phi == e_product(f), || format!("{f}: det(1 - tM) != e_i product"))?;
        ensure(lattice_check(&ch).unwrap(), || format!("{f}: K0 lattice identity fails"))?;
    }
    Ok(format!(
        "{} chains (n <= 4, a_i <= 5, mu up to {largest}); Phi also expanded directly for {direct} chains",
        chains.len()
    ))
}

fn criterion_2() -> Outcome {
    let chains = ChainPolynomial::enumerate(3, 5);
    for f in &chains {
        let mu = numerics(f).mu_n() as usize;
        let z = phi(f).map_err(|e| e.to_string())?;
        let big_phi = det_one_minus_t_of_power(&z.phi, mu, mu).unwrap();
        let oracle = monodromy_oracle(&transpose(f)).map_err(|e| e.to_string())?;
        ensure(big_phi.reverse(mu) == oracle, || format!("{f}: t^mu Phi(1/t) = {} but oracle = {oracle}", big_phi.reverse(mu)))?;
    }
    Ok(format!("{} chains (n <= 3, a_i <= 5)", chains.len()))
}

struct MainRun {
    chain: ChainPolynomial,
    objs: Vec<MatrixFactorization>,
    table: HomTable,
    ms: u128,
}

fn main_runs() -> Vec<MainRun> {
    MAIN_CHAINS
        .iter()
        .map(|c| {
            let chain: ChainPolynomial = c.parse().unwrap();
            let start = Instant::now();
            let ring = Ring::new(&chain).unwrap();
            let (_, objs) = build_collection(&ring, 0).unwrap();
            let table = HomTable::compute(&objs, 3).unwrap();
            MainRun { chain, objs, table, ms: start.elapsed().as_millis() }
        })
        .collect()
}

/// `(1 - N^a) / (1 - N) = 1 + N + .. + N^(a-1)`.
fn nakayama_oracle(mu: usize, a: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..mu).map(|i| (0..mu).map(|j| i64::from(j >= i && j - i < a)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

fn criterion_3(runs: &[MainRun]) -> Outcome {
    let mut times = Vec::new();
    for r in runs {
        let f = &r.chain;
        let euler = r.table.euler_pairing();
        let want = chi(f).unwrap().chi;
        ensure(euler == want, || format!("{f}: Euler matrix\n{euler}\n!= chi\n{want}"))?;
        if f.n() == 2 {
            let oracle = nakayama_oracle(r.objs.len(), f.a(0) as usize);
            ensure(euler == oracle, || format!("{f}: Euler matrix != (1 - N^a1)/(1 - N)"))?;
        }
        let budget = if f.n() <= 2 { 10_000 } else { 300_000 };
        ensure(r.ms < budget, || format!("{f}: {} ms exceeds the budget", r.ms))?;
        times.push(format!("({f}) {} ms", r.ms));
    }
    Ok(times.join(", "))
}

fn criterion_4(runs: &[MainRun]) -> Outcome {
    let mut cells = 0;
    for r in runs {
        let f = &r.chain;
        let k = r.objs.len();
        for e in &r.table.entries {
            cells += 1;
            if e.i == e.j {
                let want = usize::from(e.p == 0);
                ensure(e.dim == want, || format!("{f}: dim Hom(E_{0}, T^{1} E_{0}) = {2}", e.i, e.p, e.dim))?;
            } else if e.i > e.j {
                ensure(e.dim == 0, || format!("{f}: Hom(E_{}, T^{} E_{}) != 0", e.i, e.p, e.j))?;
            }
        }
        for i in 0..k {
            ensure(r.table.dim(i, i, 0) == Some(1), || format!("{f}: End(E_{i}) missing"))?;
        }
        let report = r.table.check_exceptionality();
        ensure(report.exceptional, || format!("{f}: {:?}", report.problems))?;
    }
    Ok(format!("{} chains, {cells} table cells over each scan window widened by 3", runs.len()))
}

/// Monomials of the quotient algebra, keyed by `L_f`-degree: for even `n`
/// monomials in `x1, x3, ..`, for odd `n` in `x2, x4, ..`, each exponent
/// below its `a_i`; parity one for odd `n` is the same module moved to `-x1`.
fn quotient_oracle(g: &GradingGroup, parity: u8) -> std::collections::BTreeMap<Degree, usize> {
    let f = g.chain();
    let n = f.n();
    let mut out = std::collections::BTreeMap::new();
    if parity == 1 && n % 2 == 0 {
        return out;
    }
    let vars: Vec<usize> = (0..n).filter(|i| if n % 2 == 0 { i % 2 == 0 } else { i % 2 == 1 }).collect();
    let mut exps = vec![0u32; n];
    loop {
        let mut d = g.monomial_degree(&exps);
        if parity == 1 {
            d = g.sub(&d, &g.x(0));
        }
        *out.entry(d).or_insert(0) += 1;
        let mut k = 0;
        loop {
            if k == vars.len() {
                return out;
            }
            let v = vars[k];
            if (exps[v] as i64) + 1 < f.a(v) {
                exps[v] += 1;
                break;
            }
            exps[v] = 0;
            k += 1;
        }
    }
}

fn criterion_5() -> Outcome {
    let chains = ChainPolynomial::enumerate(3, 3);
    let mut queries = 0;
    for f in &chains {
        let ring = Ring::new(f).unwrap();
        let g = ring.group();
        let (_, objs) = build_collection(&ring, 0).unwrap();
        for e in [&objs[0], objs.last().unwrap()] {
            for parity in 0..2u8 {
                let oracle = quotient_oracle(g, parity);
                let degrees = match degree_weight_bounds(e, e, parity) {
                    Some((lo, hi)) => degrees_in_weight_range(g, lo, hi),
                    None => Vec::new(),
                };
                for d in oracle.keys() {
                    ensure(degrees.contains(d), || format!("{f}: oracle degree {d:?} outside the weight bounds"))?;
                }
                for d in &degrees {
                    queries += 1;
                    let got = hom_dim(e, e, d, parity).unwrap();
                    let want = oracle.get(d).copied().unwrap_or(0);
                    ensure(got == want, || format!("{f}: parity {parity}, degree {d:?}: engine {got}, oracle {want}"))?;
                }
                if f.n() % 2 == 1 && parity == 1 {
                    let gen = g.neg(&g.x(0));
                    ensure(hom_dim(e, e, &gen, 1).unwrap() == 1, || format!("{f}: no generator in degree -x1"))?;
                    // The product of two parity-one classes lands in degree f - 2x1 + l + l'.
                    let sq = g.sub(&g.f(), &g.scale(2, &g.x(0)));
                    let want = quotient_oracle(g, 0).get(&sq).copied().unwrap_or(0);
                    ensure(hom_dim(e, e, &sq, 0).unwrap() == want, || format!("{f}: square degree mismatch"))?;
                }
            }
        }
    }
    Ok(format!("{} chains (n <= 3, a_i <= 3), {queries} graded pieces", chains.len()))
}

fn criterion_6(runs: &[MainRun]) -> Outcome {
    let mut seen = 0;
    for r in runs.iter().filter(|r| r.chain.n() == 2) {
        let f = &r.chain;
        seen += 1;
        for e in r.table.entries.iter().filter(|e| e.p != 0) {
            ensure(e.dim == 0, || format!("{f}: not strong, Hom(E_{}, T^{} E_{}) = {}", e.i, e.p, e.j, e.dim))?;
        }
        let cartan = nakayama_oracle(r.objs.len(), f.a(0) as usize);
        let got = r.table.degree_zero_matrix();
        ensure(got == cartan, || format!("{f}: degree-0 table\n{got}\n!= Cartan\n{cartan}"))?;
    }
    ensure(seen == 4, || format!("expected 4 chains with n = 2, saw {seen}"))?;
    Ok("(2,2), (2,3), (3,2), (3,3) strongly exceptional with Nakayama Cartan matrices".into())
}

fn criterion_7() -> Outcome {
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for c in ["2,2", "3,2", "2,2,2"] {
        let f: ChainPolynomial = c.parse().unwrap();
        let r = verify_triangles(&f, 0, true).map_err(|e| e.to_string())?;
        for check in &r.checks {
            match check.status {
                Status::Fail => problems.push(format!("({c}) {}: {}", check.name, check.detail)),
                Status::Inconclusive => notes.push(format!("({c}) {} inconclusive", check.name)),
                _ => {}
            }
        }
        ensure(
            r.check("triangle-k-identity").or(r.check("ladder-k-identity")).is_some(),
            || format!("({c}) ran no K-identity"),
        )?;
    }
    let chains = ChainPolynomial::enumerate(5, 4);
    for f in &chains {
        let num = numerics(f);
        let n = f.n();
        let (d, mu) = (&num.d, &num.mu);
        // Sum of d over indices n-2, n-4, .. down to 0 or 1.
        let sum: i64 = (0..n).rev().skip(1).step_by(2).map(|k| d[k]).sum();
        if mu[n] <= sum {
            problems.push(format!("({f}) mu_n = {} <= {sum}", mu[n]));
        }
    }
    if problems.is_empty() {
        let extra = if notes.is_empty() { String::new() } else { format!("; {}", notes.join(", ")) };
        Ok(format!("K-identities for (2,2), (3,2), (2,2,2); inequalities for {} chains{extra}", chains.len()))
    } else {
        Err(problems.join("; "))
    }
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(n).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn criterion_8(runs: &[MainRun]) -> Outcome {
    // Hom dimensions are invariant under adding and reducing trivial summands.
    let mut checked = 0;
    for r in runs.iter().take(8) {
        let ring = r.objs[0].ring();
        let g = ring.group();
        let a = &r.objs[0];
        let b = r.objs.last().unwrap();
        let padded = b.direct_sum(&MatrixFactorization::trivial(ring, &g.x(0))).unwrap();
        let reduced = padded.reduce();
        for k in -2..=2 {
            let l = g.scale(k, &g.x(0));
            for parity in 0..2u8 {
                let base = hom_dim(a, b, &l, parity).unwrap();
                ensure(hom_dim(a, &padded, &l, parity).unwrap() == base, || format!("({}) padding changed Hom", r.chain))?;
                ensure(hom_dim(a, &reduced, &l, parity).unwrap() == base, || format!("({}) reduce changed Hom", r.chain))?;
                checked += 1;
            }
        }
    }
    // Serre symmetry on every computed table.
    let mut entries = 0;
    for r in runs {
        let bad = serre_symmetry_check(&r.objs, &r.table).unwrap();
        ensure(bad.is_empty(), || format!("({}) Serre symmetry fails at {:?}", r.chain, bad.first()))?;
        entries += r.table.entries.len();
    }
    // Randomized exact-arithmetic identities.
    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    runner
        .run(&(small_matrix(), prop::collection::vec(-4i64..=4, 1..6)), |(a, tail)| {
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
            prop_assert!(s.u.det().unwrap().abs().is_one() && s.v.det().unwrap().abs().is_one());
            let cp = charpoly_division_free(&a).unwrap();
            let det = a.det().unwrap();
            let sign = if a.rows() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(cp.coeff(0), chainfact::exactmath::BigRat::from_integer(sign * det));
            let mut c = vec![1i64];
            c.extend(tail);
            let p = Poly::from_ints(&c);
            let inv = p.series_inverse(8).unwrap();
            prop_assert_eq!((&p * &inv).truncate(8), Poly::one());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{checked} reduce comparisons, Serre symmetry on {entries} table entries, 64 randomized SNF/charpoly/series cases"))
}

fn main() {
    let mut ok = true;
    ok &= run(1, "identity suite", criterion_1);
    ok &= run(2, "monodromy cross-check", criterion_2);
    let runs = main_runs();
    ok &= run(3, "Euler matrices equal chi", || criterion_3(&runs));
    ok &= run(4, "exceptionality", || criterion_4(&runs));
    ok &= run(5, "closed-form Hom algebras", criterion_5);
    ok &= run(6, "Nakayama algebras for n = 2", || criterion_6(&runs));
    ok &= run(7, "triangle K-identities and reduction inequalities", criterion_7);
    ok &= run(8, "property suites", || criterion_8(&runs));
    if !ok {
        std::process::exit(1);
    }
}
