//! Evaluation of formulas on algebras and on Kripke models, validity
//! sweeps, and bounded semantic consequence over co-tree models.

use crate::algebra::BiHeytingAlgebra;
use crate::enumerate::enumerate_cotrees;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::poset::Poset;
use std::collections::BTreeMap;

/// Assignment of algebra elements to variables.
pub type Valuation = BTreeMap<String, usize>;

/// Assignment of upsets (masks) to variables, for Kripke models.
pub type Coloring = BTreeMap<String, u64>;

/// Structural evaluation through the algebra's tables.
pub fn eval(alg: &BiHeytingAlgebra, f: &Formula, v: &Valuation) -> Result<usize> {
    Ok(match f {
        Formula::Var(name) => *v
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
        Formula::Top => alg.top(),
        Formula::Bot => alg.bot(),
        Formula::And(a, b) => alg.meet(eval(alg, a, v)?, eval(alg, b, v)?),
        Formula::Or(a, b) => alg.join(eval(alg, a, v)?, eval(alg, b, v)?),
        Formula::Imp(a, b) => alg.imp(eval(alg, a, v)?, eval(alg, b, v)?),
        Formula::Coimp(a, b) => alg.coimp(eval(alg, a, v)?, eval(alg, b, v)?),
    })
}

fn check_coloring(p: &Poset, coloring: &Coloring) -> Result<()> {
    for (name, &mask) in coloring {
        if mask & !p.full_mask() != 0 || !p.is_upset(mask) {
            return Err(Error::NonUpsetColor(name.clone()));
        }
    }
    Ok(())
}

/// Pointwise Kripke truth, by the standard intuitionistic clauses plus the
/// co-implication clause: `x |= a <- b` iff some `y <= x` has `y |= a` and
/// `y |/= b`.
pub fn kripke_eval(p: &Poset, coloring: &Coloring, x: usize, f: &Formula) -> Result<bool> {
    check_coloring(p, coloring)?;
    kripke_eval_unchecked(p, coloring, x, f)
}

fn kripke_eval_unchecked(p: &Poset, coloring: &Coloring, x: usize, f: &Formula) -> Result<bool> {
    Ok(match f {
        Formula::Var(name) => {
            let mask = coloring
                .get(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            mask & (1 << x) != 0
        }
        Formula::Top => true,
        Formula::Bot => false,
        Formula::And(a, b) => {
            kripke_eval_unchecked(p, coloring, x, a)?
                && kripke_eval_unchecked(p, coloring, x, b)?
        }
        Formula::Or(a, b) => {
            kripke_eval_unchecked(p, coloring, x, a)?
                || kripke_eval_unchecked(p, coloring, x, b)?
        }
        Formula::Imp(a, b) => {
            let mut ok = true;
            for y in crate::poset::mask_elements(p.up_mask(x)) {
                if kripke_eval_unchecked(p, coloring, y, a)?
                    && !kripke_eval_unchecked(p, coloring, y, b)?
                {
                    ok = false;
                    break;
                }
            }
            ok
        }
        Formula::Coimp(a, b) => {
            let mut found = false;
            for y in crate::poset::mask_elements(p.down_mask(x)) {
                if kripke_eval_unchecked(p, coloring, y, a)?
                    && !kripke_eval_unchecked(p, coloring, y, b)?
                {
                    found = true;
                    break;
                }
            }
            found
        }
    })
}

/// The set of points satisfying `f`, as a mask, computed bottom-up per
/// subformula (agrees pointwise with `kripke_eval`).
pub fn truth_set(p: &Poset, coloring: &Coloring, f: &Formula) -> Result<u64> {
    check_coloring(p, coloring)?;
    truth_set_unchecked(p, coloring, f)
}

fn truth_set_unchecked(p: &Poset, coloring: &Coloring, f: &Formula) -> Result<u64> {
    let full = p.full_mask();
    Ok(match f {
        Formula::Var(name) => *coloring
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
        Formula::Top => full,
        Formula::Bot => 0,
        Formula::And(a, b) => {
            truth_set_unchecked(p, coloring, a)? & truth_set_unchecked(p, coloring, b)?
        }
        Formula::Or(a, b) => {
            truth_set_unchecked(p, coloring, a)? | truth_set_unchecked(p, coloring, b)?
        }
        Formula::Imp(a, b) => {
            let (ta, tb) =
                (truth_set_unchecked(p, coloring, a)?, truth_set_unchecked(p, coloring, b)?);
            full & !p.down_closure_mask(ta & !tb)
        }
        Formula::Coimp(a, b) => {
            let (ta, tb) =
                (truth_set_unchecked(p, coloring, a)?, truth_set_unchecked(p, coloring, b)?);
            p.up_closure_mask(ta & !tb)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Refuted { valuation: Valuation },
}

#[derive(Clone, Copy, Debug)]
enum Instr {
    Var(u32),
    Top,
    Bot,
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Coimp(u32, u32),
}

/// A formula flattened to postorder code with shared subterms, for fast
/// sweeps. Variable slots follow the sorted variable order.
pub struct CompiledFormula {
    pub vars: Vec<String>,
    code: Vec<Instr>,
    sub_index: std::collections::HashMap<Formula, u32>,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> CompiledFormula {
        let vars: Vec<String> = f.vars().into_iter().collect();
        let slot: std::collections::HashMap<&str, u32> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i as u32))
            .collect();
        let mut code = Vec::new();
        let mut sub_index = std::collections::HashMap::new();
        fn emit(
            f: &Formula,
            slot: &std::collections::HashMap<&str, u32>,
            code: &mut Vec<Instr>,
            sub_index: &mut std::collections::HashMap<Formula, u32>,
        ) -> u32 {
            if let Some(&i) = sub_index.get(f) {
                return i;
            }
            let instr = match f {
                Formula::Var(v) => Instr::Var(slot[v.as_str()]),
                Formula::Top => Instr::Top,
                Formula::Bot => Instr::Bot,
                Formula::And(a, b) => {
                    Instr::And(emit(a, slot, code, sub_index), emit(b, slot, code, sub_index))
                }
                Formula::Or(a, b) => {
                    Instr::Or(emit(a, slot, code, sub_index), emit(b, slot, code, sub_index))
                }
                Formula::Imp(a, b) => {
                    Instr::Imp(emit(a, slot, code, sub_index), emit(b, slot, code, sub_index))
                }
                Formula::Coimp(a, b) => {
                    Instr::Coimp(emit(a, slot, code, sub_index), emit(b, slot, code, sub_index))
                }
            };
            code.push(instr);
            let idx = (code.len() - 1) as u32;
            sub_index.insert(f.clone(), idx);
            idx
        }
        emit(f, &slot, &mut code, &mut sub_index);
        CompiledFormula { vars, code, sub_index }
    }

    /// Evaluates under slot assignment; `scratch` must have `code.len()`
    /// entries. Returns the root value, leaving all subterm values in
    /// `scratch`.
    pub fn eval(
        &self,
        alg: &BiHeytingAlgebra,
        assignment: &[usize],
        scratch: &mut [usize],
    ) -> usize {
        for (i, instr) in self.code.iter().enumerate() {
            scratch[i] = match *instr {
                Instr::Var(s) => assignment[s as usize],
                Instr::Top => alg.top(),
                Instr::Bot => alg.bot(),
                Instr::And(a, b) => alg.meet(scratch[a as usize], scratch[b as usize]),
                Instr::Or(a, b) => alg.join(scratch[a as usize], scratch[b as usize]),
                Instr::Imp(a, b) => alg.imp(scratch[a as usize], scratch[b as usize]),
                Instr::Coimp(a, b) => alg.coimp(scratch[a as usize], scratch[b as usize]),
            };
        }
        scratch[self.code.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// Scratch position of a subformula after `eval`.
    pub fn position_of(&self, sub: &Formula) -> Option<usize> {
        self.sub_index.get(sub).map(|&i| i as usize)
    }
}

/// Number of valuations a sweep over `vars` into a k-element algebra needs.
pub fn sweep_size(k: usize, vars: usize) -> u128 {
    (k as u128).saturating_pow(vars as u32)
}

/// Exhaustive validity sweep with early exit. The verdict is deterministic:
/// the returned countervaluation is the first one in lexicographic order
/// (variables sorted by name, elements ascending).
pub fn is_valid(alg: &BiHeytingAlgebra, f: &Formula, budget: u64) -> Result<Verdict> {
    let compiled = CompiledFormula::new(f);
    let needed = sweep_size(alg.k(), compiled.vars.len());
    if needed > budget as u128 {
        return Err(Error::ValuationBudgetExceeded { needed, budget });
    }
    let mut scratch = vec![0usize; compiled.len()];
    let mut assignment = vec![0usize; compiled.vars.len()];
    loop {
        if compiled.eval(alg, &assignment, &mut scratch) != alg.top() {
            let valuation: Valuation = compiled
                .vars
                .iter()
                .cloned()
                .zip(assignment.iter().copied())
                .collect();
            return Ok(Verdict::Refuted { valuation });
        }
        // odometer
        let mut i = compiled.vars.len();
        loop {
            if i == 0 {
                return Ok(Verdict::Valid);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < alg.k() {
                break;
            }
            assignment[i] = 0;
            if i == 0 {
                return Ok(Verdict::Valid);
            }
        }
    }
}

/// A countermodel: a co-tree, a coloring, and the point where the conclusion
/// fails.
#[derive(Clone, Debug)]
pub struct CounterModel {
    pub poset: Poset,
    pub coloring: Coloring,
    pub point: usize,
}

#[derive(Clone, Debug)]
pub enum ConsequenceVerdict {
    Refuted(CounterModel),
    NoCountermodelUpTo(usize),
}

/// Searches all co-trees with at most `cap` points and all colorings for a
/// model satisfying every premise globally while refuting the conclusion
/// somewhere. A refutation is conclusive; absence is only conclusive up to
/// the cap.
pub fn consequence_bounded(
    premises: &[Formula],
    conclusion: &Formula,
    cap: usize,
    enum_cap: usize,
    budget: u64,
) -> Result<ConsequenceVerdict> {
    let found = search_cotree_model(premises, Some(conclusion), cap, enum_cap, budget)?;
    Ok(match found {
        Some(m) => ConsequenceVerdict::Refuted(m),
        None => ConsequenceVerdict::NoCountermodelUpTo(cap),
    })
}

/// Finds the first co-tree model (size, then enumeration order, then
/// coloring order) satisfying all premises everywhere and, when present,
/// refuting the conclusion at some point (least such point reported).
fn search_cotree_model(
    premises: &[Formula],
    refute: Option<&Formula>,
    cap: usize,
    enum_cap: usize,
    budget: u64,
) -> Result<Option<CounterModel>> {
    let mut vars = std::collections::BTreeSet::new();
    for p in premises {
        vars.extend(p.vars());
    }
    if let Some(c) = refute {
        vars.extend(c.vars());
    }
    let vars: Vec<String> = vars.into_iter().collect();
    for poset in enumerate_cotrees(cap, enum_cap)? {
        let upsets = poset.all_upsets(1 << poset.n())?;
        let needed = sweep_size(upsets.len(), vars.len());
        if needed > budget as u128 {
            return Err(Error::ValuationBudgetExceeded { needed, budget });
        }
        let full = poset.full_mask();
        let mut assignment = vec![0usize; vars.len()];
        'colorings: loop {
            let coloring: Coloring = vars
                .iter()
                .cloned()
                .zip(assignment.iter().map(|&i| upsets[i]))
                .collect();
            let mut ok = true;
            for p in premises {
                if truth_set(&poset, &coloring, p)? != full {
                    ok = false;
                    break;
                }
            }
            if ok {
                match refute {
                    None => {
                        return Ok(Some(CounterModel { poset, coloring, point: 0 }));
                    }
                    Some(c) => {
                        let t = truth_set(&poset, &coloring, c)?;
                        if t != full {
                            let point = (!t & full).trailing_zeros() as usize;
                            return Ok(Some(CounterModel { poset, coloring, point }));
                        }
                    }
                }
            }
            let mut i = vars.len();
            loop {
                if i == 0 {
                    break 'colorings;
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < upsets.len() {
                    break;
                }
                assignment[i] = 0;
                if i == 0 {
                    break 'colorings;
                }
            }
        }
    }
    Ok(None)
}

/// Report for the classical-inconsistency-lemma equivalence at a finite cap:
/// `Σ ∪ {~!~φ}` has no co-tree model of size <= cap iff `Σ |= φ` over the
/// same models.
#[derive(Clone, Debug)]
pub struct InconsistencyReport {
    pub cap: usize,
    /// Model satisfying Σ and the reductio premise, if any.
    pub reductio_model: Option<CounterModel>,
    /// Countermodel to Σ |= φ, if any.
    pub countermodel: Option<CounterModel>,
    pub equivalent: bool,
}

pub fn inconsistency_lemma_check(
    premises: &[Formula],
    phi: &Formula,
    cap: usize,
    enum_cap: usize,
    budget: u64,
) -> Result<InconsistencyReport> {
    // the reductio premise ~!~φ holds somewhere iff φ fails somewhere
    let reductio = crate::formula::coneg(crate::formula::neg(crate::formula::coneg(
        phi.clone(),
    )));
    let mut with_reductio = premises.to_vec();
    with_reductio.push(reductio);
    let reductio_model = search_cotree_model(&with_reductio, None, cap, enum_cap, budget)?;
    let countermodel = match consequence_bounded(premises, phi, cap, enum_cap, budget)? {
        ConsequenceVerdict::Refuted(m) => Some(m),
        ConsequenceVerdict::NoCountermodelUpTo(_) => None,
    };
    let equivalent = reductio_model.is_some() == countermodel.is_some();
    Ok(InconsistencyReport { cap, reductio_model, countermodel, equivalent })
}
