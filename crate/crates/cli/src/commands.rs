//! One function per subcommand. Each result is serialized, parsed back and
//! re-verified before it is reported as ok.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use zpcp::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};
use zpcp::cancel::{with_token, CancelToken};
use zpcp::hermitian::{
    bilinear_to_hermitian, dual_of, elementary_witness, hermitian_to_bilinear, integral_witness, jordan_split,
};
use zpcp::modulestruct::{compatible_basis, decomposition_type, r_basis_of_free, verify_compatible};
use zpcp::wire::{
    gram_to_wire, matrix_from_wire, matrix_to_wire, vector_to_wire, FormedLatticeDoc, HermitianGramDoc, Instance,
    InstanceDoc, LatticePairDoc, WireMatrix,
};
use zpcp::{CompatibleBasisResult, Error, FormedLattice, Prime, RBasis, Rational, Result, SigmaLattice, ZpLattice};

use crate::report::{CommandOutput, Outcome};

fn round_trip<T: Serialize + DeserializeOwned>(value: &T) -> Result<T> {
    let text = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::InternalContradiction(format!("result does not re-parse: {e}")))
}

fn to_value<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))
}

fn contradiction(what: &str) -> Error {
    Error::InternalContradiction(format!("re-verification failed: {what}"))
}

fn line(name: &str, passed: bool) -> String {
    format!("[{}] {name}", if passed { "PASS" } else { "FAIL" })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeDoc {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub rank: usize,
    #[serde(rename = "type")]
    pub decomposition: TypeDoc,
    pub free: bool,
    pub rank_consistent: bool,
}

pub fn classify(instance: Instance) -> Result<CommandOutput> {
    let Instance::SigmaLattice(m) = instance else {
        return Err(Error::Parse("classify expects a sigma_lattice payload".into()));
    };
    let p = m.prime().as_usize();
    let ty = decomposition_type(&m)?;
    let rank_consistent = p * ty.a + (p - 1) * ty.b + ty.c == m.rank();
    let result = ClassifyResult {
        rank: m.rank(),
        decomposition: TypeDoc { a: ty.a, b: ty.b, c: ty.c },
        free: ty.is_free(),
        rank_consistent,
    };
    let back = round_trip(&result)?;
    if !back.rank_consistent {
        return Err(contradiction("p a + (p-1) b + c differs from the rank"));
    }
    let diagnostics = vec![
        format!("type R^{} + T^{} + S^{}", ty.a, ty.b, ty.c),
        line(&format!("rank {} = p a + (p-1) b + c", m.rank()), rank_consistent),
        format!("free: {}", ty.is_free()),
    ];
    Ok(CommandOutput::ok(to_value(&result)?, diagnostics))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatResult {
    pub t: usize,
    pub a: usize,
    pub index_exponent: i64,
    /// R-basis `g_1, …, g_a` of the outer lattice.
    pub basis: WireMatrix,
    /// `g_1, …, g_t, p g_{t+1}, …, p g_a`, an R-basis of the inner lattice.
    pub scaled_basis: WireMatrix,
    pub pair: LatticePairDoc,
}

fn compat_from_result(p: Prime, r: &CompatResult) -> Result<(SigmaLattice, SigmaLattice, CompatibleBasisResult)> {
    let (m, l) = r.pair.to_pair(p)?;
    let vectors = matrix_from_wire(&r.basis, m.ambient_dim())?.to_rows();
    Ok((m, l, CompatibleBasisResult { basis: RBasis { vectors }, t: r.t }))
}

pub fn compat(instance: Instance) -> Result<CommandOutput> {
    let Instance::LatticePair(m, l) = instance else {
        return Err(Error::Parse("compat expects a lattice_pair payload".into()));
    };
    let p = m.prime();
    let res = compatible_basis(&m, &l)?;
    let a = res.basis.len();
    let index_exponent = m.lattice().index_of(l.lattice())?;
    let verified = verify_compatible(&m, &l, &res);
    let n = m.ambient_dim();
    let result = CompatResult {
        t: res.t,
        a,
        index_exponent,
        basis: matrix_to_wire(&zpcp::QMatrix::from_rows(n, res.basis.vectors.clone())),
        scaled_basis: matrix_to_wire(&zpcp::QMatrix::from_rows(n, res.scaled_family(p))),
        pair: LatticePairDoc::from_pair(&m, &l),
    };
    let (m2, l2, res2) = compat_from_result(p, &round_trip(&result)?)?;
    if !verified || !verify_compatible(&m2, &l2, &res2) {
        return Err(contradiction("compatible basis"));
    }
    let diagnostics = vec![
        format!("a = {a}, t = {}", res.t),
        line("g_1, ..., g_a is an R-basis of M", true),
        line("g_1, ..., g_t, p g_(t+1), ..., p g_a is an R-basis of L", true),
        line(&format!("[M : L] = p^{index_exponent} = p^(p(a-t))"), true),
    ];
    Ok(CommandOutput::ok(to_value(&result)?, diagnostics))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JordanResult {
    pub t: usize,
    pub a: usize,
    pub l0: FormedLatticeDoc,
    pub l1: FormedLatticeDoc,
    /// ℤ₍p₎-Gram matrices of the bases of `L0` and `L1`.
    pub gram_l0: WireMatrix,
    pub gram_l1: WireMatrix,
    /// Hermitian Gram matrices on R-bases of `L0` and `L1`.
    pub hermitian_gram_l0: HermitianGramDoc,
    pub hermitian_gram_l1: HermitianGramDoc,
    pub compatible_basis: WireMatrix,
}

fn formed_input(instance: Instance, command: &str) -> Result<FormedLattice> {
    match instance {
        Instance::FormedLattice(l) => Ok(l),
        Instance::HermitianGram(g) => hermitian_to_bilinear(&g),
        _ => Err(Error::Parse(format!("{command} expects a formed_lattice or hermitian_gram payload"))),
    }
}

pub fn jordan(instance: Instance) -> Result<CommandOutput> {
    let l = formed_input(instance, "jordan")?;
    let p = l.prime();
    let split = jordan_split(&l)?;
    let t = split.t;
    let a = split.basis.basis.len();
    let l0_basis = RBasis { vectors: split.basis.basis.vectors[..t].to_vec() };
    let l1_basis = r_basis_of_free(split.l1.module())?;
    let result = JordanResult {
        t,
        a,
        l0: FormedLatticeDoc::from_formed(&split.l0),
        l1: FormedLatticeDoc::from_formed(&split.l1),
        gram_l0: matrix_to_wire(&split.l0.gram()),
        gram_l1: matrix_to_wire(&split.l1.gram()),
        hermitian_gram_l0: gram_to_wire(&bilinear_to_hermitian(&split.l0, &l0_basis)?),
        hermitian_gram_l1: gram_to_wire(&bilinear_to_hermitian(&split.l1, &l1_basis)?),
        compatible_basis: matrix_to_wire(&zpcp::QMatrix::from_rows(
            l.module().ambient_dim(),
            split.basis.basis.vectors.clone(),
        )),
    };

    let back = round_trip(&result)?;
    let l0 = back.l0.to_formed(p)?;
    let l1 = back.l1.to_formed(p)?;
    let cross = &(l0.lattice().basis() * l.form()) * &l1.lattice().basis().transpose();
    let checks = [
        ("cross Gram of L0 and L1 is zero", cross.is_zero()),
        ("L0 + L1 = L", l0.lattice().sum(l1.lattice())? == *l.lattice() && l0.lattice().rank() + l1.lattice().rank() == l.lattice().rank()),
        ("L0 is unimodular", l0.lattice().rank() == 0 || dual_of(&l0)?.lattice() == l0.lattice()),
        (
            "L1 is p-modular",
            l1.lattice().rank() == 0 || dual_of(&l1)?.lattice().scale(&p.to_rational())? == *l1.lattice(),
        ),
        ("rank L0 = p t", l0.lattice().rank() == p.as_usize() * t),
    ];
    let mut diagnostics = vec![format!("a = {a}, t = {t}")];
    diagnostics.extend(checks.iter().map(|(name, ok)| line(name, *ok)));
    if let Some((name, _)) = checks.iter().find(|c| !c.1) {
        return Err(contradiction(name));
    }
    Ok(CommandOutput::ok(to_value(&result)?, diagnostics))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    Integral,
    Unimodular,
    Modular(i64),
    Elementary,
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integral" => Ok(Predicate::Integral),
            "unimodular" => Ok(Predicate::Unimodular),
            "elementary" => Ok(Predicate::Elementary),
            _ => s
                .strip_prefix("modular:")
                .and_then(|j| j.parse().ok())
                .map(Predicate::Modular)
                .ok_or_else(|| Error::Parse(format!("unknown predicate {s:?}"))),
        }
    }
}

impl std::fmt::Display for Predicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Predicate::Integral => write!(f, "integral"),
            Predicate::Unimodular => write!(f, "unimodular"),
            Predicate::Modular(j) => write!(f, "modular:{j}"),
            Predicate::Elementary => write!(f, "elementary"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub predicate: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

/// A basis vector of one lattice that is missing from the other.
fn difference_witness(x: &ZpLattice, y: &ZpLattice) -> Option<Vec<Rational>> {
    let missing = |from: &ZpLattice, to: &ZpLattice| from.basis().row_iter().find(|r| !to.contains(r)).map(<[Rational]>::to_vec);
    missing(x, y).or_else(|| missing(y, x))
}

fn predicate_witness(l: &FormedLattice, predicate: Predicate) -> Result<Option<Vec<Rational>>> {
    let p = l.prime();
    match predicate {
        Predicate::Integral => integral_witness(l),
        Predicate::Elementary => elementary_witness(l),
        Predicate::Unimodular => Ok(difference_witness(l.lattice(), dual_of(l)?.lattice())),
        Predicate::Modular(j) => Ok(difference_witness(l.lattice(), &dual_of(l)?.lattice().scale(&p.pow(j))?)),
    }
}

/// Whether `w` shows that `predicate` fails for `l`.
fn witness_refutes(l: &FormedLattice, predicate: Predicate, w: &[Rational]) -> Result<bool> {
    let dual = dual_of(l)?;
    let in_l = l.lattice().contains(w);
    Ok(match predicate {
        Predicate::Integral => in_l && !dual.lattice().contains(w),
        Predicate::Unimodular => in_l != dual.lattice().contains(w),
        Predicate::Modular(j) => in_l != dual.lattice().scale(&l.prime().pow(j))?.contains(w),
        Predicate::Elementary => {
            (in_l && !dual.lattice().contains(w))
                || (!in_l && dual.lattice().scale(&l.prime().to_rational())?.contains(w))
        }
    })
}

pub fn check(instance: Instance, predicate: Predicate) -> Result<CommandOutput> {
    let l = formed_input(instance, "check")?;
    let witness = predicate_witness(&l, predicate)?;
    let result = CheckResult {
        predicate: predicate.to_string(),
        holds: witness.is_none(),
        witness: witness.as_deref().map(vector_to_wire),
    };
    let back = round_trip(&result)?;
    if let Some(w) = &back.witness {
        if !witness_refutes(&l, predicate, &zpcp::wire::vector_from_wire(w)?)? {
            return Err(contradiction("witness does not refute the predicate"));
        }
    }
    let mut diagnostics = vec![line(&format!("lattice is {predicate}"), back.holds)];
    if let Some(w) = &back.witness {
        diagnostics.push(format!("witness [{}]", w.join(", ")));
    }
    let outcome = if back.holds { Outcome::Ok } else { Outcome::CheckFailed };
    Ok(CommandOutput { outcome, ..CommandOutput::ok(to_value(&result)?, diagnostics) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionLine {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelftestResult {
    pub primes: Vec<u32>,
    pub max_rank: usize,
    pub inject_fault: bool,
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionLine>,
}

/// Runs the acceptance criteria concurrently, one thread per criterion.
pub fn selftest(cfg: &AcceptanceConfig, token: &CancelToken) -> Result<CommandOutput> {
    let runs: Vec<Result<CriterionLine>> = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&(id, name)| {
                scope.spawn(move || {
                    let start = std::time::Instant::now();
                    let report = with_token(token, || run_criterion(id, cfg));
                    let seconds = start.elapsed().as_secs_f64();
                    match report {
                        Ok(r) => Ok(CriterionLine {
                            id,
                            name: name.to_string(),
                            passed: r.passed,
                            summary: r.summary,
                            details: r.details,
                            seconds,
                        }),
                        Err(Error::Cancelled) => Err(Error::Cancelled),
                        Err(e) => Ok(CriterionLine {
                            id,
                            name: name.to_string(),
                            passed: false,
                            summary: format!("aborted: {e}"),
                            details: vec![e.to_string()],
                            seconds,
                        }),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    let criteria = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let failed = criteria.iter().filter(|c| !c.passed).count();
    let result = SelftestResult {
        primes: cfg.primes.iter().map(|p| p.get()).collect(),
        max_rank: cfg.max_rank,
        inject_fault: cfg.inject_fault,
        passed: criteria.len() - failed,
        failed,
        criteria,
    };
    let back = round_trip(&result)?;
    let mut diagnostics = Vec::new();
    for c in &back.criteria {
        diagnostics.push(format!(
            "[{}] criterion {}: {}: {} ({:.1}s)",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.summary,
            c.seconds
        ));
        if !c.passed {
            diagnostics.extend(c.details.iter().map(|d| format!("    {d}")));
        }
    }
    diagnostics.push(format!("{} passed, {} failed", back.passed, back.failed));
    let outcome = if failed == 0 { Outcome::Ok } else { Outcome::CheckFailed };
    Ok(CommandOutput { outcome, seed: Some(cfg.seed), ..CommandOutput::ok(to_value(&result)?, diagnostics) })
}

/// Parses and validates an instance document.
pub fn load_instance(text: &str) -> Result<(InstanceDoc, Instance)> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let instance = doc.validate()?;
    Ok((doc, instance))
}
