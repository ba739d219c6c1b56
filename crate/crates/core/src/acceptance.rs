//! Acceptance criteria as runnable checks.
//!
//! Every criterion is deterministic in the configured seed and reports a single
//! pass/fail verdict together with diagnostic lines.

use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::arith::{format_rational, frac, rat, Prime, Rational};
use crate::cancel::checkpoint;
use crate::generate::{
    block_type, elementary_hermitian, free_pair, random_formed, random_gl_local, random_hermitian_gram,
    random_matrix, random_sublattice, rng_from_seed,
};
use crate::groupring::{CycloElt, MaxOrderElt, QAlgebraElt};
use crate::hermitian::{
    bilinear_to_hermitian, dim2_gram, dual_base_change, dual_of, elementary_witness, hermitian_to_bilinear,
    is_elementary, is_integral, jordan_checks, jordan_split, r_basis,
};
use crate::modulestruct::{
    compatible_basis, decomposition_type, is_free, tate_dimensions, verify_compatible, verify_counterexample,
    DecompositionType, SigmaLattice,
};
use crate::plattice::{hnf_local, snf_local, vec_scale, QMatrix, ZpLattice};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub primes: Vec<Prime>,
    pub max_rank: usize,
    pub seed: u64,
    /// Scales one basis vector before verification; every affected criterion must then fail.
    pub inject_fault: bool,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            primes: [2, 3, 5].map(|p| Prime::new(p).expect("prime")).to_vec(),
            max_rank: 3,
            seed: 0,
            inject_fault: false,
        }
    }
}

impl AcceptanceConfig {
    fn primes_among(&self, allowed: &[u32]) -> Vec<Prime> {
        self.primes.iter().copied().filter(|p| allowed.contains(&p.get())).collect()
    }

    fn rng(&self, criterion: u8) -> rand_chacha::ChaCha8Rng {
        rng_from_seed(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(criterion as u64))
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] criterion {}: {}: {}", self.id, self.name, self.summary)
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "compatible basis round trip"),
    (2, "chain of lattices between pR and R"),
    (3, "Jordan splitting of elementary lattices"),
    (4, "mixed pair without compatible basis"),
    (5, "rank-2 non-elementary example"),
    (6, "dual lattice has the same type"),
    (7, "trace form and Hermitian round trip"),
    (8, "classification oracle"),
    (9, "normal form canonicity"),
];

/// Collects failures and a count of checked cases.
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, context: String, e: Error) {
        self.cases += 1;
        self.failures.push(format!("{context}: error {e}"));
    }

    fn finish(self, id: u8, unit: &str) -> CriterionReport {
        let passed = self.failures.is_empty();
        let summary = if passed {
            format!("{} {unit} passed", self.cases)
        } else {
            format!("{} of {} {unit} failed", self.failures.len(), self.cases)
        };
        report(id, passed, summary, self.failures)
    }
}

fn report(id: u8, passed: bool, summary: String, details: Vec<String>) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    CriterionReport { id, name, passed, summary, details }
}

fn rank_range(cfg: &AcceptanceConfig) -> std::ops::RangeInclusive<usize> {
    1..=cfg.max_rank.min(3)
}

pub fn criterion_compatible_round_trip(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(1);
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3, 5]) {
        for a in rank_range(cfg) {
            for t in 0..=a {
                for i in 0..25 {
                    checkpoint()?;
                    let ctx = format!("p={p} a={a} t={t} #{i}", p = p.get());
                    let inst = free_pair(p, a, t, &mut rng)?;
                    match compatible_basis(&inst.outer, &inst.inner) {
                        Ok(mut res) => {
                            if cfg.inject_fault {
                                res.basis.vectors[0] = vec_scale(&res.basis.vectors[0], &p.to_rational());
                            }
                            let ok = res.t == t && verify_compatible(&inst.outer, &inst.inner, &res);
                            tally.check(ok, || format!("{ctx}: got t={}, verified={}", res.t, verify_compatible(&inst.outer, &inst.inner, &res)));
                        }
                        Err(Error::Cancelled) => return Err(Error::Cancelled),
                        Err(e) => tally.error(ctx, e),
                    }
                }
            }
        }
    }
    Ok(tally.finish(1, "instances"))
}

/// All R-sublattices `pR ⊆ L ⊆ R`: sums of cyclic ones generated by vectors of `R/pR`.
pub fn lattices_between_p_r_and_r(p: Prime) -> Result<Vec<ZpLattice>> {
    let r = SigmaLattice::regular(p);
    let n = p.as_usize();
    let pr = r.lattice().scale(&p.to_rational())?;
    let mut found: Vec<ZpLattice> = vec![pr.clone()];
    let total = (n as u64).pow(n as u32);
    for code in 0..total {
        checkpoint()?;
        let mut c = code;
        let v: Vec<Rational> = (0..n)
            .map(|_| {
                let d = c % n as u64;
                c /= n as u64;
                rat(d as i64)
            })
            .collect();
        let l = pr.sum(&r.r_span(&[v])?)?;
        if !found.contains(&l) {
            found.push(l);
        }
    }
    let mut i = 0;
    while i < found.len() {
        for j in 0..i {
            let s = found[i].sum(&found[j])?;
            if !found.contains(&s) {
                found.push(s);
            }
        }
        i += 1;
    }
    Ok(found)
}

pub fn criterion_chain(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3, 5]) {
        let lattices = lattices_between_p_r_and_r(p)?;
        let r = SigmaLattice::regular(p);
        let count_ok = lattices.len() == p.as_usize() + 1;
        tally.check(count_ok, || format!("p={}: {} lattices, expected {}", p.get(), lattices.len(), p.get() + 1));
        let chain = lattices
            .iter()
            .all(|x| lattices.iter().all(|y| x.contains_lattice(y) || y.contains_lattice(x)));
        tally.check(chain, || format!("p={}: not totally ordered", p.get()));
        let mut free = Vec::new();
        for l in &lattices {
            if is_free(&r.with_lattice(l.clone())?)? {
                free.push(l.clone());
            }
        }
        let pr = r.lattice().scale(&p.to_rational())?;
        let endpoints = free.len() == 2 && free.contains(r.lattice()) && free.contains(&pr);
        tally.check(endpoints, || format!("p={}: {} free lattices in the chain", p.get(), free.len()));
    }
    Ok(tally.finish(2, "properties"))
}

pub fn criterion_jordan(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(3);
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3, 5]) {
        for a in rank_range(cfg) {
            for t in 0..=a {
                for i in 0..25 {
                    checkpoint()?;
                    let ctx = format!("p={} a={a} t={t} #{i}", p.get());
                    let inst = elementary_hermitian(p, a, t, &mut rng)?;
                    match jordan_split(&inst.lattice) {
                        Ok(mut split) => {
                            if cfg.inject_fault {
                                let target = if split.l0.lattice().rank() > 0 { &mut split.l0 } else { &mut split.l1 };
                                let mut rows = target.lattice().basis().to_rows();
                                rows[0] = vec_scale(&rows[0], &p.to_rational());
                                let lat = ZpLattice::from_rows(target.module().ambient_dim(), rows, p)?;
                                *target = target.with_lattice(lat).unwrap_or_else(|_| target.clone());
                            }
                            let checks = jordan_checks(&inst.lattice, &split)?;
                            let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
                            tally.check(split.t == t && failed.is_empty(), || {
                                format!("{ctx}: t={} failed checks {failed:?}", split.t)
                            });
                        }
                        Err(Error::Cancelled) => return Err(Error::Cancelled),
                        Err(e) => tally.error(ctx, e),
                    }
                }
            }
        }
    }
    Ok(tally.finish(3, "instances"))
}

pub fn criterion_mixed_pair(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[3, 5]) {
        checkpoint()?;
        let r = verify_counterexample(p)?;
        tally.check(r.passes(), || {
            format!(
                "p={}: type M {}, type L {}, pM in L {}, L in M {}, index exponent {}",
                r.p, r.type_m, r.type_l, r.pm_in_l, r.l_in_m, r.index_exponent
            )
        });
    }
    Ok(tally.finish(4, "primes"))
}

/// The dual base change of the rank-2 example as tabulated for reference:
/// `[[(1/p, 0), (0, −π̄⁻¹)], [(0, −π⁻¹), (1/p, 0)]]` in `S ⊕ T` coordinates.
pub fn tabulated_dual_gram(p: Prime) -> Vec<Vec<MaxOrderElt>> {
    let pi = CycloElt::pi(p);
    let inv_p = MaxOrderElt::new(frac(1, p.get() as i64), CycloElt::zero(p));
    let pi_bar_inv = pi.conj().inverse().expect("pi is nonzero");
    let pi_inv = pi.inverse().expect("pi is nonzero");
    vec![
        vec![inv_p.clone(), MaxOrderElt::new(rat(0), pi_bar_inv.neg())],
        vec![MaxOrderElt::new(rat(0), pi_inv.neg()), inv_p],
    ]
}

fn show_max_order(x: &MaxOrderElt) -> String {
    let t: Vec<String> = x.t.coeffs().iter().map(format_rational).collect();
    format!("({}, [{}])", format_rational(&x.s), t.join(", "))
}

fn max_order_product(a: &[Vec<MaxOrderElt>], b: &[Vec<MaxOrderElt>]) -> Vec<Vec<MaxOrderElt>> {
    let p = a[0][0].prime();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(MaxOrderElt::zero(p), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

#[derive(Default)]
struct Checklist {
    details: Vec<String>,
}

impl Checklist {
    fn line(&mut self, ok: bool, text: String) {
        self.details.push(format!("{} {text}", if ok { "ok  " } else { "FAIL" }));
    }
}

pub fn criterion_dim2_example(_cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let p = Prime::new(3)?;
    let mut list = Checklist::default();

    let gram = dim2_gram(p);
    let l = hermitian_to_bilinear(&gram)?;
    let basis = r_basis(&l)?;
    let change = dual_base_change(&l, &basis)?;
    let computed: Vec<Vec<MaxOrderElt>> =
        change.iter().map(|r| r.iter().map(QAlgebraElt::components).collect()).collect();

    let product = max_order_product(&gram.components(), &computed);
    let identity: Vec<Vec<MaxOrderElt>> = (0..2)
        .map(|i| (0..2).map(|j| if i == j { MaxOrderElt::one(p) } else { MaxOrderElt::zero(p) }).collect())
        .collect();
    list.line(product == identity, "Gram times computed dual base change is the identity".into());

    let dual = dual_of(&l)?;
    let dual_gens: Vec<Vec<Rational>> = change
        .iter()
        .map(|row| {
            let n = p.as_usize();
            let mut v = vec![rat(0); 2 * n];
            for (k, c) in row.iter().enumerate() {
                let gk = &basis.vectors[k];
                let moved = c.act_on(gk, l.module().sigma());
                for (x, y) in v.iter_mut().zip(moved) {
                    *x += y;
                }
            }
            v
        })
        .collect();
    let span = l.module().r_span(&dual_gens)?;
    list.line(span == *dual.lattice(), "dual basis vectors span L^# as an R-module".into());

    let tabulated = tabulated_dual_gram(p);
    for i in 0..2 {
        for j in 0..2 {
            let ok = computed[i][j] == tabulated[i][j];
            list.line(
                ok,
                format!(
                    "dual Gram entry ({},{}): computed {} tabulated {}",
                    i + 1,
                    j + 1,
                    show_max_order(&computed[i][j]),
                    show_max_order(&tabulated[i][j])
                ),
            );
        }
    }
    let tab_product = max_order_product(&gram.components(), &tabulated);
    if tab_product != identity {
        list.details.push(format!(
            "note Gram times tabulated matrix has (1,1) entry {}, so the tabulated matrix is not an inverse",
            show_max_order(&tab_product[0][0])
        ));
    }

    let e1 = MaxOrderElt::new(rat(1), CycloElt::zero(p));
    list.line(!e1.is_in_r(), "e_1 = (1, 0) is not in R".into());

    list.line(is_integral(&l)?, "lattice is integral".into());
    let witness = elementary_witness(&l)?;
    let p_dual = dual.lattice().scale(&p.to_rational())?;
    match witness {
        Some(w) => {
            let ok = !is_elementary(&l)? && p_dual.contains(&w) && !l.lattice().contains(&w);
            let shown: Vec<String> = w.iter().map(format_rational).collect();
            list.line(ok, format!("not elementary, witness [{}] lies in pL^# but not in L", shown.join(", ")));
        }
        None => list.line(false, "lattice reported elementary".into()),
    }

    let failed = list.details.iter().filter(|d| d.starts_with("FAIL")).count();
    let total = list.details.iter().filter(|d| !d.starts_with("note")).count();
    let summary = if failed == 0 { format!("{total} checks") } else { format!("{failed} of {total} checks failed") };
    Ok(report(5, failed == 0, summary, list.details))
}

fn type_list(p: Prime, max_rank: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=max_rank.min(2) {
        for b in 0..=2 {
            for c in 0..=2 {
                let dim = p.as_usize() * a + (p.as_usize() - 1) * b + c;
                if dim > 0 && dim <= 12 {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

pub fn criterion_dual_type(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(6);
    let mut tally = Tally::new();
    let primes = cfg.primes_among(&[2, 3]);
    let per_prime = if primes.is_empty() { 0 } else { 50usize.div_ceil(primes.len()) };
    for p in primes {
        let types = type_list(p, cfg.max_rank);
        for i in 0..per_prime {
            checkpoint()?;
            let (a, b, c) = types[i % types.len()];
            let l = random_formed(p, a, b, c, &mut rng)?;
            let built = DecompositionType::new(a, b, c);
            let t_l = decomposition_type(l.module())?;
            let t_dual = decomposition_type(dual_of(&l)?.module())?;
            tally.check(t_l == built && t_dual == built, || {
                format!("p={} built {built}: L classified {t_l}, L^# classified {t_dual}", p.get())
            });
        }
    }
    Ok(tally.finish(6, "lattices"))
}

pub fn criterion_trace_form(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(7);
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3, 5]) {
        let n = p.as_usize();
        let mut gram = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = QAlgebraElt::sigma_pow(p, i as i64);
                let y = QAlgebraElt::sigma_pow(p, j as i64);
                gram.set(i, j, x.mul(&y.involution()).trace_reg() / p.to_rational());
            }
        }
        tally.check(gram == QMatrix::identity(n), || format!("p={}: trace form Gram is\n{gram}", p.get()));
        for i in 0..50 {
            checkpoint()?;
            let a = rng.gen_range(rank_range(cfg));
            let g = random_hermitian_gram(p, a, &mut rng)?;
            let l = hermitian_to_bilinear(&g)?;
            let std_basis = crate::modulestruct::RBasis {
                vectors: (0..a).map(|k| ZpLattice::unit_vector(n * a, k * n)).collect(),
            };
            let back = bilinear_to_hermitian(&l, &std_basis)?;
            tally.check(back == g, || format!("p={} #{i}: Hermitian to bilinear to Hermitian differs", p.get()));

            let q = crate::generate::random_gl_z(n * a, &mut rng);
            let moved = l.change_coordinates(&q)?;
            let b = r_basis(&moved)?;
            let h = bilinear_to_hermitian(&moved, &b)?;
            let rows: Vec<Vec<Rational>> = b.vectors.iter().flat_map(|g| moved.module().orbit(g)).collect();
            let x = QMatrix::from_rows(n * a, rows);
            let orbit_gram = &(&x * moved.form()) * &x.transpose();
            let rebuilt = hermitian_to_bilinear(&h)?;
            tally.check(*rebuilt.form() == orbit_gram, || {
                format!("p={} #{i}: bilinear to Hermitian to bilinear differs", p.get())
            });
        }
    }
    Ok(tally.finish(7, "checks"))
}

/// `dim_𝔽p(top/sub)` by enumerating coset representatives `Σ c_i b_i`, `0 ≤ c_i < p`,
/// over a basis `b` of `top`; `None` if `p·top ⊄ sub`.
pub fn brute_force_quotient_dim(top: &ZpLattice, sub: &ZpLattice) -> Result<Option<usize>> {
    let p = top.prime();
    let n = p.as_usize();
    let basis = top.basis();
    let pr = p.to_rational();
    if basis.row_iter().any(|b| !sub.contains(&vec_scale(b, &pr))) {
        return Ok(None);
    }
    let r = basis.nrows();
    let mut reps: Vec<Vec<Rational>> = Vec::new();
    for code in 0..(n as u64).pow(r as u32) {
        checkpoint()?;
        let mut c = code;
        let mut v = vec![rat(0); top.ambient_dim()];
        for row in basis.row_iter() {
            let d = rat((c % n as u64) as i64);
            c /= n as u64;
            for (x, y) in v.iter_mut().zip(row) {
                *x += &d * y;
            }
        }
        let new_class = reps.iter().all(|u| {
            let diff: Vec<Rational> = v.iter().zip(u).map(|(a, b)| a - b).collect();
            !sub.contains(&diff)
        });
        if new_class {
            reps.push(v);
        }
    }
    let mut k = 0;
    let mut size = reps.len();
    while size.is_multiple_of(n) && size > 1 {
        size /= n;
        k += 1;
    }
    Ok((size == 1).then_some(k))
}

/// `(dim Ĥ⁰, dim Ĥ¹)` by direct coset enumeration.
pub fn brute_force_tate(l: &SigmaLattice) -> Result<Option<(usize, usize)>> {
    let n_mat = l.norm_matrix();
    let s_minus = l.sigma_minus_one();
    let fixed = l.lattice().kernel_of(&s_minus)?;
    let norm_image = l.lattice().map(n_mat)?;
    let norm_kernel = l.lattice().kernel_of(n_mat)?;
    let aug_image = l.lattice().map(&s_minus)?;
    let h0 = brute_force_quotient_dim(&fixed, &norm_image)?;
    let h1 = brute_force_quotient_dim(&norm_kernel, &aug_image)?;
    Ok(h0.zip(h1))
}

pub fn criterion_classification(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(8);
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3, 5]) {
        let reference = [
            ("R", SigmaLattice::regular(p), (0, 0)),
            ("S", SigmaLattice::trivial(p), (1, 0)),
            ("T", SigmaLattice::cyclotomic(p), (0, 1)),
        ];
        let mut oracle_ok = true;
        for (name, m, want) in &reference {
            let brute = brute_force_tate(m)?;
            let computed = tate_dimensions(m)?;
            let ok = brute == Some(*want) && computed == *want;
            oracle_ok &= ok;
            tally.check(ok, || {
                format!("p={} {name}: brute force {brute:?}, computed {computed:?}, reference {want:?}", p.get())
            });
        }
        if !oracle_ok {
            continue;
        }
        let pn = p.as_usize();
        for a in 0..=12 / pn {
            for b in 0..=(12 - pn * a) / (pn - 1) {
                for c in 0..=(12 - pn * a - (pn - 1) * b) {
                    if a + b + c == 0 {
                        continue;
                    }
                    checkpoint()?;
                    let m = block_type(p, a, b, c, &mut rng)?;
                    let want = DecompositionType::new(a, b, c);
                    match decomposition_type(&m) {
                        Ok(got) => tally.check(got == want, || format!("p={} built {want}, classified {got}", p.get())),
                        Err(Error::Cancelled) => return Err(Error::Cancelled),
                        Err(e) => tally.error(format!("p={} built {want}", p.get()), e),
                    }
                }
            }
        }
    }
    Ok(tally.finish(8, "checks"))
}

pub fn criterion_normal_forms(cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    let mut rng = cfg.rng(9);
    let mut tally = Tally::new();
    for p in cfg.primes_among(&[2, 3]) {
        for i in 0..200 {
            checkpoint()?;
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m = random_matrix(p, rows, cols, &mut rng);
            let u = random_gl_local(p, rows, &mut rng);
            let v = random_gl_local(p, cols, &mut rng);
            let hnf = hnf_local(&m, p)?;
            let hnf_scrambled = hnf_local(&(&u * &m), p)?;
            tally.check(hnf == hnf_scrambled, || format!("p={} #{i}: HNF changed under row scramble of\n{m}", p.get()));
            let snf = snf_local(&m, p)?;
            let snf_scrambled = snf_local(&(&(&u * &m) * &v), p)?;
            tally.check(snf == snf_scrambled, || {
                format!("p={} #{i}: SNF exponents {snf:?} vs {snf_scrambled:?}", p.get())
            });

            let n = rng.gen_range(1..=4);
            let top = loop {
                let g = random_matrix(p, n, n, &mut rng);
                if !g.det().is_zero() {
                    break ZpLattice::from_generators(&g, p)?;
                }
            };
            let mid = random_sublattice(&top, &mut rng)?;
            let bottom = random_sublattice(&mid, &mut rng)?;
            let whole = top.index_of(&bottom)?;
            let parts = top.index_of(&mid)? + mid.index_of(&bottom)?;
            tally.check(whole == parts, || format!("p={} #{i}: index {whole} != {parts}", p.get()));
        }
    }
    Ok(tally.finish(9, "checks"))
}

pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Result<CriterionReport> {
    match id {
        1 => criterion_compatible_round_trip(cfg),
        2 => criterion_chain(cfg),
        3 => criterion_jordan(cfg),
        4 => criterion_mixed_pair(cfg),
        5 => criterion_dim2_example(cfg),
        6 => criterion_dual_type(cfg),
        7 => criterion_trace_form(cfg),
        8 => criterion_classification(cfg),
        9 => criterion_normal_forms(cfg),
        other => Err(Error::PreconditionViolated(format!("no criterion {other}"))),
    }
}

/// Runs every criterion; an error inside one criterion becomes a failing report.
pub fn run_all(cfg: &AcceptanceConfig) -> Result<Vec<CriterionReport>> {
    CRITERIA
        .iter()
        .map(|&(id, _)| match run_criterion(id, cfg) {
            Ok(r) => Ok(r),
            Err(Error::Cancelled) => Err(Error::Cancelled),
            Err(e) => Ok(report(id, false, format!("aborted: {e}"), vec![e.to_string()])),
        })
        .collect()
}
