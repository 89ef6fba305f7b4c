//! Fixed-parameter inference, polytope propagation and whole inference
//! functions.
//!
//! All three run the same elimination over the model's factors; only the
//! value semiring changes. Ties are broken towards the lexicographically
//! least hidden string under the declared alphabet order.

use rayon::prelude::*;

use crate::dp::{eliminate, DpValue, Var};
use crate::geometry::ExponentVector;
use crate::model::{FactorModel, ParameterPoint};
use crate::polytope::{np_add, NewtonPolytope};
use crate::{Error, Rational, Result};

/// Default refusal threshold for enumerating observations.
pub const DEFAULT_OBSERVATION_CAP: u128 = 1 << 20;

/// A hidden assignment, as symbol indices into the hidden alphabet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Explanation(pub Vec<usize>);

impl Explanation {
    pub fn render(&self, model: &FactorModel) -> String {
        model.format_hidden(&self.0)
    }
}

#[derive(Clone)]
struct Best {
    score: Rational,
    witness: Vec<usize>,
    v: std::sync::Arc<crate::Direction>,
}

impl DpValue for Best {
    fn extend(&self, monomial: &ExponentVector, symbol: Option<usize>) -> Self {
        let mut witness = self.witness.clone();
        witness.extend(symbol);
        Best { score: &self.score + monomial.dot(&self.v), witness, v: self.v.clone() }
    }

    fn merge(self, other: Self) -> Self {
        match self.score.cmp(&other.score) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.witness <= other.witness {
                    self
                } else {
                    other
                }
            }
        }
    }
}

impl DpValue for NewtonPolytope {
    fn extend(&self, monomial: &ExponentVector, symbol: Option<usize>) -> Self {
        let symbols: Vec<usize> = symbol.into_iter().collect();
        self.translate_extend(monomial, &symbols)
    }

    fn merge(self, other: Self) -> Self {
        np_add(&self, &other).expect("equal dimensions within one model")
    }
}

fn hidden_order(model: &FactorModel) -> Vec<Var> {
    (0..model.hidden_count()).map(Var::Hidden).collect()
}

fn fixed(tau: &[usize]) -> Vec<Option<usize>> {
    tau.iter().copied().map(Some).collect()
}

fn check_v(model: &FactorModel, v: &ParameterPoint) -> Result<()> {
    if v.dim() != model.d() {
        return Err(Error::DimensionMismatch { expected: model.d(), found: v.dim() });
    }
    Ok(())
}

/// Best explanation of `tau` under log-parameters `v`, with its score.
pub fn viterbi(model: &FactorModel, tau: &[usize], v: &ParameterPoint) -> Result<(Explanation, Rational)> {
    check_v(model, v)?;
    model.check_observation(tau)?;
    let init = Best { score: Rational::from_integer(0.into()), witness: Vec::new(), v: std::sync::Arc::new(crate::Direction(v.0.clone())) };
    let best = eliminate(model, &hidden_order(model), &fixed(tau), init).ok_or(Error::Unexplainable)?;
    Ok((Explanation(best.witness), best.score))
}

/// Newton polytope of the observation polynomial `f_τ`, each vertex labelled
/// with its least explanation.
pub fn observation_polytope(model: &FactorModel, tau: &[usize]) -> Result<NewtonPolytope> {
    model.check_observation(tau)?;
    let init = NewtonPolytope::monomial(ExponentVector::zeros(model.d()), Vec::new());
    eliminate(model, &hidden_order(model), &fixed(tau), init).ok_or(Error::Unexplainable)
}

/// Table of explanations for every observation in lexicographic order.
/// `None` marks an observation with no positive-probability explanation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InferenceFunction {
    pub table: Vec<Option<Explanation>>,
}

impl InferenceFunction {
    pub fn get(&self, index: usize) -> Option<&Explanation> {
        self.table[index].as_ref()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Refuses observation spaces larger than `cap`.
pub fn check_cap(model: &FactorModel, cap: u128) -> Result<usize> {
    let count = model.observation_count();
    if count > cap {
        return Err(Error::CapExceeded { requested: count, cap });
    }
    Ok(count as usize)
}

/// Evaluates `Φ_v` on every observation. Observations are evaluated in
/// parallel on the current rayon pool.
pub fn inference_function(model: &FactorModel, v: &ParameterPoint, cap: u128) -> Result<InferenceFunction> {
    check_v(model, v)?;
    let count = check_cap(model, cap)?;
    let table = (0..count)
        .into_par_iter()
        .map(|i| match viterbi(model, &model.observation_at(i as u128), v) {
            Ok((h, _)) => Ok(Some(h)),
            Err(Error::Unexplainable) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InferenceFunction { table })
}
