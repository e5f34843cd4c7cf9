//! The nested sets of distinguished minors, the denominator polynomial, and
//! effective localization certificates.
//!
//! Three nested sets of `t`-minors are cut out by index conditions on the
//! leading `t + 1` rows and columns; the innermost has exactly `mn` members
//! and generates the whole minor algebra once the product
//! `F = [1..t-1|1..t-1] [1..t|1..t] [1..t+1|1..t+1]` is inverted. The
//! certificate machinery exhibits this effectively: for every minor it finds
//! exact identities clearing it through the chain, step by step, with each
//! identity verified by full expansion.
//!
//! The per-step searches are blind bounded-degree linear algebra over the
//! generator products matching the target multidegree. Minors that resist a
//! direct search are handled in stages: once some minors are certified, they
//! are admitted as auxiliary generators and the resulting mixed identity is
//! composed into a pure one by substituting their certificates, multiplying
//! through by the cofactor and expanding leftover cofactor powers through
//! the 2 x 2 determinant identity. The composed identity is re-verified by
//! expansion, so staging never weakens exactness.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::One;

use crate::comb::{combinations, Combination};
use crate::error::{Error, Result};
use crate::poly::{minor_poly, PolyRing, SparsePoly};
use crate::relations::{
    subalgebra_membership, MinorSymbol, RelationExpr,
};

/// Level of the nested minor sets.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PhiLevel {
    Phi0,
    Phi1,
    Phi2,
}

/// One of the nested sets of `t`-minors.
#[derive(Clone, Debug)]
pub struct PhiSet {
    pub level: PhiLevel,
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub members: Vec<MinorSymbol>,
}

/// Index accessor with the convention that the 0th index is 0, which makes
/// the defining conditions uniform for `t = 1`.
fn ix(c: &Combination, i: usize) -> usize {
    if i == 0 {
        0
    } else {
        c.indices()[i - 1]
    }
}

/// Membership predicate of a minor in the set of the given level.
pub fn phi_condition(level: PhiLevel, rows: &Combination, cols: &Combination, t: usize) -> bool {
    let at = ix(rows, t);
    let at1 = ix(rows, t - 1);
    let bt = ix(cols, t);
    let bt1 = ix(cols, t - 1);
    match level {
        PhiLevel::Phi0 => {
            (at <= t + 1 && bt <= t + 1)
                || (at1 == t - 1 && bt1 == t - 1)
                || (at == t && bt1 <= t)
                || (at1 <= t && bt == t)
        }
        PhiLevel::Phi1 => {
            (at <= t + 1 && bt <= t + 1)
                || (at1 == t - 1 && bt1 == t - 1)
                || at == t
                || bt == t
        }
        PhiLevel::Phi2 => (at1 <= t && bt1 <= t) || at == t || bt == t,
    }
}

/// Enumerates the set of the given level by scanning all `t`-minors.
pub fn phi_set(level: PhiLevel, m: usize, n: usize, t: usize) -> Result<PhiSet> {
    if t >= m || m > n || t < 1 {
        return Err(Error::Param(alloc::format!(
            "need 1 <= t < m <= n, got (m, n, t) = ({m}, {n}, {t})"
        )));
    }
    let mut members = Vec::new();
    for rows in combinations(m, t)? {
        for cols in combinations(n, t)? {
            if phi_condition(level, &rows, &cols, t) {
                members.push(MinorSymbol::new(rows.clone(), cols)?);
            }
        }
    }
    Ok(PhiSet { level, m, n, t, members })
}

/// The denominator data: the product polynomial
/// `F = [1..t-1|..] [1..t|..] [1..t+1|..]`, the 2 x 2 determinant identity
/// expressing the outer pair through `t`-minors, and the resulting
/// representation of `F` in the innermost generator set.
#[derive(Clone, Debug)]
pub struct DenominatorF {
    pub poly: SparsePoly,
    /// `delta_{t-1} delta_{t+1} - (2 x 2 determinant of t-minors)`; expands
    /// to zero.
    pub pair_identity: RelationExpr,
    /// `F - delta_t * (2 x 2 determinant)`; expands to zero and exhibits
    /// `F` as a cubic in innermost-set minors.
    pub representation: RelationExpr,
}

/// The 2 x 2 determinant expansion of `delta_{t-1} delta_{t+1}` in
/// `t`-minors; all four entries lie in the innermost set.
pub fn pair_expansion(t: usize) -> Result<RelationExpr> {
    let top: Vec<usize> = (1..=t).collect();
    let mut bent: Vec<usize> = (1..=t - 1).collect();
    bent.push(t + 1);
    let a1 = MinorSymbol::from_indices(&top, &top)?;
    let a2 = MinorSymbol::from_indices(&bent, &bent)?;
    let b1 = MinorSymbol::from_indices(&top, &bent)?;
    let b2 = MinorSymbol::from_indices(&bent, &top)?;
    Ok(RelationExpr::from_terms(alloc::vec![
        (BigRational::one(), alloc::vec![a1, a2]),
        (-BigRational::one(), alloc::vec![b1, b2]),
    ]))
}

pub fn denominator_f(m: usize, n: usize, t: usize) -> Result<DenominatorF> {
    if t >= m || m > n {
        return Err(Error::Param(alloc::format!("need t < m <= n")));
    }
    let ring = PolyRing::new(m, n);
    let leading = |i: usize| -> Result<SparsePoly> {
        let c: Vec<usize> = (1..=i).collect();
        minor_poly(&ring, &Combination::new(c.clone(), m)?, &Combination::new(c, n)?)
    };
    let poly = leading(t - 1)?.mul(&leading(t)?).mul(&leading(t + 1)?);
    let expansion = pair_expansion(t)?;
    let pair_syms = alloc::vec![MinorSymbol::leading(t - 1), MinorSymbol::leading(t + 1)];
    let mut pair_identity =
        RelationExpr::from_terms(alloc::vec![(BigRational::one(), pair_syms.clone())]);
    pair_identity = pair_identity.minus(&expansion);
    let mut f_syms = pair_syms;
    f_syms.push(MinorSymbol::leading(t));
    let mut representation = RelationExpr::from_terms(alloc::vec![(BigRational::one(), f_syms)]);
    representation = representation.minus(&expansion.mul_symbol(&MinorSymbol::leading(t)));
    // both identities must expand to zero
    if !pair_identity.expand(&ring)?.is_zero() || !representation.expand(&ring)?.is_zero() {
        return Err(Error::Internal(alloc::format!("denominator identities failed expansion")));
    }
    Ok(DenominatorF { poly, pair_identity, representation })
}

// ---------------------------------------------------------------------------
// certificate search

/// The three clearing steps of the localization chain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ClaimStep {
    /// `delta_t^k M` lands in the outer set.
    ClearIntoPhi2,
    /// `(delta_{t-1} delta_{t+1})^k M` lands in the middle set.
    PairIntoPhi1,
    /// `delta_t^k M` lands in the innermost set.
    ClearIntoPhi0,
}

impl ClaimStep {
    pub fn target_level(self) -> PhiLevel {
        match self {
            ClaimStep::ClearIntoPhi2 => PhiLevel::Phi2,
            ClaimStep::PairIntoPhi1 => PhiLevel::Phi1,
            ClaimStep::ClearIntoPhi0 => PhiLevel::Phi0,
        }
    }

    /// Cofactor symbols consumed per unit of `k`.
    pub fn cofactor_symbols(self, t: usize) -> Vec<MinorSymbol> {
        match self {
            ClaimStep::ClearIntoPhi2 | ClaimStep::ClearIntoPhi0 => {
                alloc::vec![MinorSymbol::leading(t)]
            }
            ClaimStep::PairIntoPhi1 => {
                alloc::vec![MinorSymbol::leading(t - 1), MinorSymbol::leading(t + 1)]
            }
        }
    }

    /// The cofactor as an expression in target-set minors (the identity map
    /// for the principal minor, the 2 x 2 expansion for the pair).
    pub fn cofactor_in_target(self, t: usize) -> Result<RelationExpr> {
        match self {
            ClaimStep::ClearIntoPhi2 | ClaimStep::ClearIntoPhi0 => {
                Ok(RelationExpr::from_terms(alloc::vec![(
                    BigRational::one(),
                    alloc::vec![MinorSymbol::leading(t)],
                )]))
            }
            ClaimStep::PairIntoPhi1 => pair_expansion(t),
        }
    }

    /// Normalized degree of the representation for exponent `k`: number of
    /// `t`-minor factors per product.
    pub fn rep_degree(self, k: usize) -> usize {
        match self {
            ClaimStep::ClearIntoPhi2 | ClaimStep::ClearIntoPhi0 => k + 1,
            ClaimStep::PairIntoPhi1 => 2 * k + 1,
        }
    }
}

/// A verified step identity: `cofactor^k * minor = rep`, with every factor
/// of every term in the step's target set (or among admitted auxiliaries for
/// intermediate mixed certificates).
#[derive(Clone, Debug)]
pub struct StepCertificate {
    pub minor: MinorSymbol,
    pub step: ClaimStep,
    pub k: usize,
    pub rep: RelationExpr,
}

impl StepCertificate {
    /// `cofactor^k * minor - rep`; expands to zero when valid.
    pub fn residual(&self, t: usize) -> RelationExpr {
        let mut cof_syms = Vec::new();
        for _ in 0..self.k {
            cof_syms.extend(self.step.cofactor_symbols(t));
        }
        cof_syms.push(self.minor.clone());
        let lhs = RelationExpr::from_terms(alloc::vec![(BigRational::one(), cof_syms)]);
        lhs.minus(&self.rep)
    }
}

/// Search bounds for the certificate machinery.
#[derive(Clone, Copy, Debug)]
pub struct LocalizeBounds {
    /// Largest clearing exponent tried per step.
    pub k_max: usize,
    /// Largest representation degree (number of generator factors).
    pub deg_bound: usize,
    /// Candidate-product budget per linear system.
    pub max_candidates: usize,
}

impl LocalizeBounds {
    pub fn default_for(t: usize) -> Self {
        LocalizeBounds { k_max: 3, deg_bound: t + 2, max_candidates: 50_000 }
    }
}

/// Precomputed context shared by all searches at one `(m, n, t)`.
pub struct ClaimContext {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub ring: PolyRing,
    pub phi0: PhiSet,
    pub phi1: PhiSet,
    pub phi2: PhiSet,
    pub bounds: LocalizeBounds,
    phi_polys: [Vec<SparsePoly>; 3],
}

impl ClaimContext {
    pub fn new(m: usize, n: usize, t: usize, bounds: LocalizeBounds) -> Result<Self> {
        let ring = PolyRing::new(m, n);
        let phi0 = phi_set(PhiLevel::Phi0, m, n, t)?;
        let phi1 = phi_set(PhiLevel::Phi1, m, n, t)?;
        let phi2 = phi_set(PhiLevel::Phi2, m, n, t)?;
        let polys = |set: &PhiSet| -> Result<Vec<SparsePoly>> {
            set.members.iter().map(|s| s.poly(&ring)).collect()
        };
        let phi_polys = [polys(&phi0)?, polys(&phi1)?, polys(&phi2)?];
        Ok(ClaimContext { m, n, t, ring, phi0, phi1, phi2, bounds, phi_polys })
    }

    pub fn level_set(&self, level: PhiLevel) -> &PhiSet {
        match level {
            PhiLevel::Phi0 => &self.phi0,
            PhiLevel::Phi1 => &self.phi1,
            PhiLevel::Phi2 => &self.phi2,
        }
    }

    fn level_polys(&self, level: PhiLevel) -> &[SparsePoly] {
        match level {
            PhiLevel::Phi0 => &self.phi_polys[0],
            PhiLevel::Phi1 => &self.phi_polys[1],
            PhiLevel::Phi2 => &self.phi_polys[2],
        }
    }

    pub fn contains(&self, level: PhiLevel, sym: &MinorSymbol) -> bool {
        phi_condition(level, sym.rows(), sym.cols(), self.t)
    }

    fn cofactor_poly(&self, step: ClaimStep) -> Result<SparsePoly> {
        let mut acc =
            SparsePoly::constant(self.ring.nvars(), BigRational::one());
        for s in step.cofactor_symbols(self.t) {
            acc = acc.mul(&s.poly(&self.ring)?);
        }
        Ok(acc)
    }

    /// Blind bounded search for `cofactor^k * minor` in the algebra of the
    /// step's target set, smallest `k` first, optionally with auxiliary
    /// certified generators admitted into the products.
    pub fn search(
        &self,
        minor: &MinorSymbol,
        step: ClaimStep,
        auxiliaries: &[MinorSymbol],
    ) -> Result<Option<StepCertificate>> {
        let cofactor = self.cofactor_poly(step)?;
        let target_set = self.level_set(step.target_level());
        let mut gens: Vec<MinorSymbol> = target_set.members.clone();
        let mut gen_polys: Vec<SparsePoly> = self.level_polys(step.target_level()).to_vec();
        for aux in auxiliaries {
            gens.push(aux.clone());
            gen_polys.push(aux.poly(&self.ring)?);
        }
        let minor_p = minor.poly(&self.ring)?;
        let mut target = minor_p;
        for k in 0..=self.bounds.k_max {
            if step.rep_degree(k) <= self.bounds.deg_bound {
                let rep = subalgebra_membership(
                    &target,
                    &gen_polys,
                    &self.ring,
                    step.rep_degree(k),
                    self.bounds.max_candidates,
                );
                // a budget overflow on one exponent only abandons that k
                match rep {
                    Ok(Some(rep)) => {
                        let rep_expr = RelationExpr::from_terms(
                            rep.into_iter()
                                .map(|(c, ixs)| {
                                    (c, ixs.into_iter().map(|i| gens[i].clone()).collect())
                                })
                                .collect(),
                        );
                        return Ok(Some(StepCertificate {
                            minor: minor.clone(),
                            step,
                            k,
                            rep: rep_expr,
                        }));
                    }
                    Ok(None) | Err(Error::Budget(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            target = target.mul(&cofactor);
        }
        Ok(None)
    }
}

/// Runner abstraction for the independent pure searches of one stage; the
/// companion crate plugs a threaded implementation in here.
pub trait SearchRunner: Sync {
    fn run(
        &self,
        ctx: &ClaimContext,
        step: ClaimStep,
        minors: &[MinorSymbol],
    ) -> Vec<Result<Option<StepCertificate>>>;
}

/// Runs every search on the calling thread.
pub struct SequentialRunner;

impl SearchRunner for SequentialRunner {
    fn run(
        &self,
        ctx: &ClaimContext,
        step: ClaimStep,
        minors: &[MinorSymbol],
    ) -> Vec<Result<Option<StepCertificate>>> {
        minors.iter().map(|m| ctx.search(m, step, &[])).collect()
    }
}

/// Substitutes certificates for the auxiliary factors of a mixed identity,
/// producing a pure certificate with a larger exponent: every term is
/// multiplied by enough cofactor powers to clear each auxiliary through its
/// own certificate, and surplus cofactors are re-expressed in target-set
/// minors. The composed identity is verified by expansion.
fn compose_certificate(
    ctx: &ClaimContext,
    mixed: &StepCertificate,
    certified: &BTreeMap<MinorSymbol, StepCertificate>,
) -> Result<StepCertificate> {
    let step = mixed.step;
    let target = step.target_level();
    let budget_of = |factors: &[MinorSymbol]| -> usize {
        factors
            .iter()
            .filter(|s| !ctx.contains(target, s))
            .map(|s| certified.get(s).map(|c| c.k).unwrap_or(0))
            .sum()
    };
    let extra: usize =
        mixed.rep.terms().iter().map(|(_, f)| budget_of(f)).max().unwrap_or(0);
    let cof_in_target = step.cofactor_in_target(ctx.t)?;
    let mut new_rep = RelationExpr::new();
    for (c, factors) in mixed.rep.terms() {
        let mut term_expr =
            RelationExpr::from_terms(alloc::vec![(c.clone(), Vec::new())]);
        let mut spent = 0;
        for f in factors {
            if ctx.contains(target, f) {
                term_expr = term_expr.mul_symbol(f);
            } else {
                let cert = certified.get(f).ok_or_else(|| {
                    Error::Internal(alloc::format!("auxiliary {f} lacks a certificate"))
                })?;
                term_expr = term_expr.product(&cert.rep);
                spent += cert.k;
            }
        }
        // surplus cofactor powers stay as target-set products
        term_expr = term_expr.product(&cof_in_target.power(extra - spent));
        new_rep = new_rep.sum(&term_expr);
    }
    let composed = StepCertificate {
        minor: mixed.minor.clone(),
        step,
        k: mixed.k + extra,
        rep: new_rep,
    };
    if !composed.residual(ctx.t).expand(&ctx.ring)?.is_zero() {
        return Err(Error::Internal(alloc::format!(
            "composed certificate for {} failed expansion",
            composed.minor
        )));
    }
    Ok(composed)
}

/// Certifies every minor of a list through one step, staging over
/// previously certified minors when the direct search fails. Returns the
/// map of pure certificates; minors that stay uncertified are absent.
fn certify_step(
    ctx: &ClaimContext,
    runner: &dyn SearchRunner,
    step: ClaimStep,
    minors: &[MinorSymbol],
) -> Result<BTreeMap<MinorSymbol, StepCertificate>> {
    let mut done: BTreeMap<MinorSymbol, StepCertificate> = BTreeMap::new();
    let mut pending: Vec<MinorSymbol> = minors.to_vec();
    pending.sort();
    // direct pass, independent per minor
    let outcomes = runner.run(ctx, step, &pending);
    let mut still = Vec::new();
    for (minor, outcome) in pending.into_iter().zip(outcomes) {
        match outcome? {
            Some(cert) => {
                // direct certificates must verify as well
                if !cert.residual(ctx.t).expand(&ctx.ring)?.is_zero() {
                    return Err(Error::Internal(alloc::format!(
                        "direct certificate for {minor} failed expansion"
                    )));
                }
                done.insert(minor, cert);
            }
            None => still.push(minor),
        }
    }
    // staged passes: admit certified minors as auxiliaries and compose
    loop {
        let mut progress = false;
        let mut next = Vec::new();
        let auxiliaries: Vec<MinorSymbol> = done.keys().cloned().collect();
        for minor in still {
            match ctx.search(&minor, step, &auxiliaries)? {
                Some(mixed) => {
                    let pure = compose_certificate(ctx, &mixed, &done)?;
                    done.insert(minor, pure);
                    progress = true;
                }
                None => next.push(minor),
            }
        }
        still = next;
        if still.is_empty() || !progress {
            break;
        }
    }
    Ok(done)
}

/// Chain summary for one `t`-minor.
#[derive(Clone, Debug)]
pub struct MinorCertificate {
    pub minor: MinorSymbol,
    /// Innermost level containing the minor (3 = outside all sets).
    pub level: u8,
    /// Certificate into the outer set, absent for members.
    pub step1: Option<StepCertificate>,
    /// Step exponents contributing to the final power of `F`.
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub k3: Option<usize>,
    /// Exponent `K` such that `F^K * minor` lies in the innermost algebra,
    /// composed from the verified step identities; absent when a step is
    /// missing.
    pub f_power: Option<usize>,
}

/// Full localization report at `(m, n, t)`.
pub struct LocalizeReport {
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub phi0: PhiSet,
    pub phi1: PhiSet,
    pub phi2: PhiSet,
    pub denominator: DenominatorF,
    /// Pure step-2 certificates for the outer-minus-middle minors.
    pub step2: BTreeMap<MinorSymbol, StepCertificate>,
    /// Pure step-3 certificates for the middle-minus-inner minors.
    pub step3: BTreeMap<MinorSymbol, StepCertificate>,
    pub minors: Vec<MinorCertificate>,
    /// Every minor carries a complete verified chain.
    pub complete: bool,
}

/// Runs the full certificate chain for every `t`-minor.
pub fn verify_localize(
    m: usize,
    n: usize,
    t: usize,
    bounds: LocalizeBounds,
) -> Result<LocalizeReport> {
    verify_localize_with(&SequentialRunner, m, n, t, bounds)
}

pub fn verify_localize_with(
    runner: &dyn SearchRunner,
    m: usize,
    n: usize,
    t: usize,
    bounds: LocalizeBounds,
) -> Result<LocalizeReport> {
    let ctx = ClaimContext::new(m, n, t, bounds)?;
    let denominator = denominator_f(m, n, t)?;

    let mut all_minors = Vec::new();
    for rows in combinations(m, t)? {
        for cols in combinations(n, t)? {
            all_minors.push(MinorSymbol::new(rows.clone(), cols)?);
        }
    }
    let level_of = |s: &MinorSymbol| -> u8 {
        if ctx.contains(PhiLevel::Phi0, s) {
            0
        } else if ctx.contains(PhiLevel::Phi1, s) {
            1
        } else if ctx.contains(PhiLevel::Phi2, s) {
            2
        } else {
            3
        }
    };

    // steps 2 and 3 cover fixed families shared by all chains
    let outer_gap: Vec<MinorSymbol> =
        all_minors.iter().filter(|s| level_of(s) == 2).cloned().collect();
    let middle_gap: Vec<MinorSymbol> =
        all_minors.iter().filter(|s| level_of(s) == 1).cloned().collect();
    let step2 = certify_step(&ctx, runner, ClaimStep::PairIntoPhi1, &outer_gap)?;
    let step3 = certify_step(&ctx, runner, ClaimStep::ClearIntoPhi0, &middle_gap)?;

    // step 1 per outside minor
    let outside: Vec<MinorSymbol> =
        all_minors.iter().filter(|s| level_of(s) == 3).cloned().collect();
    let step1 = certify_step(&ctx, runner, ClaimStep::ClearIntoPhi2, &outside)?;

    // contribution of a middle-set minor to the final step-3 exponent
    let k3_of = |s: &MinorSymbol| -> Option<usize> {
        match level_of(s) {
            0 => Some(0),
            1 => step3.get(s).map(|c| c.k),
            _ => None,
        }
    };
    // contribution of an outer-set minor through steps 2 and 3
    let k23_of = |s: &MinorSymbol| -> Option<(usize, usize)> {
        match level_of(s) {
            0 => Some((0, 0)),
            1 => k3_of(s).map(|k3| (0, k3)),
            2 => {
                let cert = step2.get(s)?;
                let mut worst = 0;
                for (_, factors) in cert.rep.terms() {
                    let mut sum = 0;
                    for f in factors {
                        sum += k3_of(f)?;
                    }
                    worst = worst.max(sum);
                }
                Some((cert.k, worst))
            }
            _ => None,
        }
    };

    let mut minors_report = Vec::new();
    let mut complete = true;
    for minor in &all_minors {
        let level = level_of(minor);
        let entry = match level {
            0 => MinorCertificate {
                minor: minor.clone(),
                level,
                step1: None,
                k1: Some(0),
                k2: Some(0),
                k3: Some(0),
                f_power: Some(0),
            },
            1 | 2 => {
                let (k2, k3) = match k23_of(minor) {
                    Some(pair) => pair,
                    None => {
                        complete = false;
                        minors_report.push(MinorCertificate {
                            minor: minor.clone(),
                            level,
                            step1: None,
                            k1: Some(0),
                            k2: None,
                            k3: None,
                            f_power: None,
                        });
                        continue;
                    }
                };
                MinorCertificate {
                    minor: minor.clone(),
                    level,
                    step1: None,
                    k1: Some(0),
                    k2: Some(k2),
                    k3: Some(k3),
                    f_power: Some(k2 + k3),
                }
            }
            _ => {
                let Some(cert1) = step1.get(minor) else {
                    complete = false;
                    minors_report.push(MinorCertificate {
                        minor: minor.clone(),
                        level,
                        step1: None,
                        k1: None,
                        k2: None,
                        k3: None,
                        f_power: None,
                    });
                    continue;
                };
                // worst-case per-term exponents through the later steps
                let mut k2_total = Some(0usize);
                let mut k3_total = Some(0usize);
                for (_, factors) in cert1.rep.terms() {
                    let mut sum2 = 0;
                    let mut sum3 = 0;
                    let mut ok = true;
                    for f in factors {
                        match k23_of(f) {
                            Some((a, b)) => {
                                sum2 += a;
                                sum3 += b;
                            }
                            None => ok = false,
                        }
                    }
                    if ok {
                        k2_total = k2_total.map(|v| v.max(sum2));
                        k3_total = k3_total.map(|v| v.max(sum3));
                    } else {
                        k2_total = None;
                        k3_total = None;
                        break;
                    }
                }
                let f_power = match (k2_total, k3_total) {
                    (Some(a), Some(b)) => Some(cert1.k + a + b),
                    _ => {
                        complete = false;
                        None
                    }
                };
                MinorCertificate {
                    minor: minor.clone(),
                    level,
                    step1: Some(cert1.clone()),
                    k1: Some(cert1.k),
                    k2: k2_total,
                    k3: k3_total,
                    f_power,
                }
            }
        };
        minors_report.push(entry);
    }

    Ok(LocalizeReport {
        m,
        n,
        t,
        phi0: ctx.phi0.clone(),
        phi1: ctx.phi1.clone(),
        phi2: ctx.phi2.clone(),
        denominator,
        step2,
        step3,
        minors: minors_report,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_sizes_and_nesting() {
        for (m, n, t) in [(3, 4, 2), (4, 4, 2), (4, 5, 2), (4, 5, 3), (5, 5, 2)] {
            let p0 = phi_set(PhiLevel::Phi0, m, n, t).unwrap();
            let p1 = phi_set(PhiLevel::Phi1, m, n, t).unwrap();
            let p2 = phi_set(PhiLevel::Phi2, m, n, t).unwrap();
            assert_eq!(p0.members.len(), m * n, "Phi0 at ({m},{n},{t})");
            for s in &p0.members {
                assert!(p1.members.contains(s));
            }
            for s in &p1.members {
                assert!(p2.members.contains(s));
            }
        }
        assert!(phi_set(PhiLevel::Phi0, 2, 4, 2).is_err());
        assert!(phi_set(PhiLevel::Phi0, 4, 3, 2).is_err());
    }

    #[test]
    fn phi_examples() {
        // the leading minor is everywhere
        let lead = MinorSymbol::leading(2);
        for level in [PhiLevel::Phi0, PhiLevel::Phi1, PhiLevel::Phi2] {
            assert!(phi_condition(level, lead.rows(), lead.cols(), 2));
        }
        // [34|34] fails all conditions at t = 2
        let far = MinorSymbol::from_indices(&[3, 4], &[3, 4]).unwrap();
        assert!(!phi_condition(PhiLevel::Phi2, far.rows(), far.cols(), 2));
        // [13|24] is in the outer set but not the middle one
        let mid = MinorSymbol::from_indices(&[1, 3], &[2, 4]).unwrap();
        assert!(phi_condition(PhiLevel::Phi2, mid.rows(), mid.cols(), 2));
        assert!(!phi_condition(PhiLevel::Phi1, mid.rows(), mid.cols(), 2));
        // [12|34] is in the middle set but not the innermost
        let gap = MinorSymbol::from_indices(&[1, 2], &[3, 4]).unwrap();
        assert!(phi_condition(PhiLevel::Phi1, gap.rows(), gap.cols(), 2));
        assert!(!phi_condition(PhiLevel::Phi0, gap.rows(), gap.cols(), 2));
    }

    #[test]
    fn phi0_is_everything_for_t1() {
        let p0 = phi_set(PhiLevel::Phi0, 3, 5, 1).unwrap();
        assert_eq!(p0.members.len(), 15);
    }

    #[test]
    fn denominator_identities_hold() {
        for (m, n, t) in [(3, 4, 2), (4, 4, 2), (4, 5, 3), (5, 5, 4)] {
            let f = denominator_f(m, n, t).unwrap();
            assert!(!f.poly.is_zero());
            // evaluation at the identity matrix is 1
            let id = crate::matrix::DenseMatrix::identity(m.max(n));
            let id_mn = crate::matrix::DenseMatrix::from_fn(m, n, |i, j| {
                id.get(i, j).clone()
            });
            let ring = PolyRing::new(m, n);
            assert!(f.poly.evaluate_at_matrix(&ring, &id_mn).unwrap().is_one());
        }
    }

    #[test]
    fn direct_search_handles_the_listed_examples() {
        let bounds = LocalizeBounds::default_for(2);
        let ctx = ClaimContext::new(4, 4, 2, bounds).unwrap();
        // members come back at k = 0
        let member = MinorSymbol::from_indices(&[1, 2], &[1, 3]).unwrap();
        let cert = ctx.search(&member, ClaimStep::ClearIntoPhi0, &[]).unwrap().unwrap();
        assert_eq!(cert.k, 0);
        // [12|34]: one clearing multiplication through the middle set
        let gap = MinorSymbol::from_indices(&[1, 2], &[3, 4]).unwrap();
        let cert = ctx.search(&gap, ClaimStep::ClearIntoPhi0, &[]).unwrap().unwrap();
        assert_eq!(cert.k, 1);
        assert!(cert.residual(2).expand(&ctx.ring).unwrap().is_zero());
        // [13|24]: the pair clears it into the middle set at k = 1
        let cross = MinorSymbol::from_indices(&[1, 3], &[2, 4]).unwrap();
        let cert = ctx.search(&cross, ClaimStep::PairIntoPhi1, &[]).unwrap().unwrap();
        assert_eq!(cert.k, 1);
        assert!(cert.residual(2).expand(&ctx.ring).unwrap().is_zero());
    }

    #[test]
    fn full_chain_at_3_4_2() {
        let report = verify_localize(3, 4, 2, LocalizeBounds::default_for(2)).unwrap();
        assert!(report.complete);
        assert_eq!(report.minors.len(), 18);
        assert_eq!(report.phi0.members.len(), 12);
        for entry in &report.minors {
            let k = entry.f_power.expect("complete chain");
            assert!(k <= 9, "excessive exponent at {}", entry.minor);
            if entry.level == 0 {
                assert_eq!(k, 0);
            }
            assert!(entry.k1.unwrap_or(0) <= 3);
            assert!(entry.k2.unwrap_or(0) <= 3);
            assert!(entry.k3.unwrap_or(0) <= 3);
        }
    }
}
